#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <variant>
#include <vector>

#include "evkmeans/bench.hpp"
#include "evkmeans/cluster.hpp"
#include "evkmeans/data.hpp"
#include "evkmeans/distributions.hpp"
#include "evkmeans/metrics.hpp"
#include "evkmeans/mle.hpp"
#include "evkmeans/rng.hpp"

namespace py = pybind11;
using namespace evkmeans;

namespace {

RunConfig make_config(int k, const std::string& init, double tol, int max_iter,
                      std::uint64_t seed, int block_size, double alpha) {
  RunConfig cfg;
  cfg.k = k;
  if (init == "random") {
    cfg.init = InitMethod::Random;
  } else if (init == "kmeanspp") {
    cfg.init = InitMethod::KMeansPP;
  } else {
    throw std::invalid_argument("init must be 'random' or 'kmeanspp'");
  }
  cfg.tol = tol;
  cfg.max_iter = max_iter;
  cfg.seed = seed;
  cfg.bmm.block_size = block_size;
  cfg.pot.alpha = alpha;
  return cfg;
}

py::dict tail_dict(const TailFit& tail) {
  py::dict out;
  switch (tail.family) {
    case TailFamily::Gev: {
      const auto& p = std::get<GevParams>(tail.params);
      out["family"] = "gev";
      out["mu"] = p.mu;
      out["sigma"] = p.sigma;
      out["xi"] = p.xi;
      break;
    }
    case TailFamily::Gpd: {
      const auto& p = std::get<GpdParams>(tail.params);
      out["family"] = "gpd";
      out["mu"] = p.mu;
      out["sigma"] = p.sigma;
      out["xi"] = p.xi;
      break;
    }
    case TailFamily::Distance:
      out["family"] = "distance";
      break;
  }
  out["threshold"] = tail.threshold;
  out["samples"] = tail.sample.size();
  return out;
}

py::dict outcome_dict(const ClusterOutcome& run) {
  py::dict out;
  out["labels"] = run.labels;
  out["centroids"] = run.model.centroids;
  out["iterations"] = run.iterations;
  out["objective_trace"] = run.objective_trace;
  py::list tails;
  for (const TailFit& tail : run.model.tails) tails.append(tail_dict(tail));
  out["tails"] = tails;
  return out;
}

template <typename ParamsT>
py::dict fit_dict(const FitReport<ParamsT>& fit) {
  py::dict out;
  out["mu"] = fit.params.mu;
  out["sigma"] = fit.params.sigma;
  out["xi"] = fit.params.xi;
  out["neg_log_lik"] = fit.neg_log_lik;
  out["converged"] = fit.converged;
  out["evals"] = fit.evals;
  out["fallback_used"] = fit.fallback_used;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Extreme-value k-means clustering toolkit";

  m.def(
      "synth",
      [](int n, int k, int d, double sigma, std::uint64_t seed) {
        SynthConfig cfg;
        cfg.n = n;
        cfg.k = k;
        cfg.d = d;
        cfg.sigma = sigma;
        cfg.seed = seed;
        const Dataset ds = gen_synthetic(cfg);
        return py::make_tuple(ds.x, *ds.y, ds.name);
      },
      py::arg("n"), py::arg("k"), py::arg("d"), py::arg("sigma") = 0.2,
      py::arg("seed") = 0,
      "Gaussian blobs around uniform centroids in [-1,1]^d; returns "
      "(x, labels, name).");

  m.def(
      "add_uninformative",
      [](const Matrix& x, int extra, std::uint64_t seed) {
        Dataset ds;
        ds.x = x;
        Rng rng(seed);
        return add_uninformative(ds, extra, rng).x;
      },
      py::arg("x"), py::arg("extra"), py::arg("seed") = 0,
      "Append standard-normal noise columns to a sample matrix.");

  m.def(
      "cluster",
      [](const std::string& algorithm, const Matrix& x, int k,
         const std::string& init, double tol, int max_iter, std::uint64_t seed,
         int block_size, double alpha) {
        const RunConfig cfg =
            make_config(k, init, tol, max_iter, seed, block_size, alpha);
        return outcome_dict(run_algorithm(algorithm, x, cfg));
      },
      py::arg("algorithm"), py::arg("x"), py::arg("k"),
      py::arg("init") = "kmeanspp", py::arg("tol") = 1e-6,
      py::arg("max_iter") = 100, py::arg("seed") = 0,
      py::arg("block_size") = 16, py::arg("alpha") = 0.2,
      "Run 'kmeans', 'gev', or 'gpd' clustering and return labels, "
      "centroids, the objective trace, and per-cluster tail fits.");

  m.def(
      "fit_gev",
      [](const std::vector<double>& values) { return fit_dict(fit_gev(values)); },
      py::arg("values"), "Maximum-likelihood GEV fit of block maxima.");

  m.def(
      "fit_gpd",
      [](const std::vector<double>& values, bool fix_location) {
        FitOptions opts;
        opts.fix_gpd_location = fix_location;
        return fit_dict(fit_gpd(values, opts));
      },
      py::arg("values"), py::arg("fix_location") = true,
      "Maximum-likelihood GPD fit of threshold excesses.");

  m.def(
      "gev_cdf",
      [](double x, double mu, double sigma, double xi) {
        return gev_cdf({mu, sigma, xi}, x);
      },
      py::arg("x"), py::arg("mu") = 0.0, py::arg("sigma") = 1.0,
      py::arg("xi") = 0.0);
  m.def(
      "gpd_cdf",
      [](double x, double mu, double sigma, double xi) {
        return gpd_cdf({mu, sigma, xi}, x);
      },
      py::arg("x"), py::arg("mu") = 0.0, py::arg("sigma") = 1.0,
      py::arg("xi") = 0.0);
  m.def(
      "gev_quantile",
      [](double q, double mu, double sigma, double xi) {
        return gev_quantile({mu, sigma, xi}, q);
      },
      py::arg("q"), py::arg("mu") = 0.0, py::arg("sigma") = 1.0,
      py::arg("xi") = 0.0);
  m.def(
      "gpd_quantile",
      [](double q, double mu, double sigma, double xi) {
        return gpd_quantile({mu, sigma, xi}, q);
      },
      py::arg("q"), py::arg("mu") = 0.0, py::arg("sigma") = 1.0,
      py::arg("xi") = 0.0);

  m.def(
      "acc",
      [](const std::vector<int>& truth, const std::vector<int>& pred) {
        return acc(truth, pred);
      },
      py::arg("truth"), py::arg("pred"),
      "Clustering accuracy under the best label matching.");
  m.def(
      "ari",
      [](const std::vector<int>& truth, const std::vector<int>& pred) {
        return ari(truth, pred);
      },
      py::arg("truth"), py::arg("pred"), "Adjusted Rand index.");
  m.def(
      "nmi",
      [](const std::vector<int>& truth, const std::vector<int>& pred) {
        return nmi(truth, pred);
      },
      py::arg("truth"), py::arg("pred"), "Normalized mutual information.");
  m.def(
      "silhouette",
      [](const Matrix& x, const std::vector<int>& labels) {
        return silhouette(x, labels);
      },
      py::arg("x"), py::arg("labels"), "Mean silhouette coefficient.");

  m.def(
      "standardize",
      [](const Matrix& x, bool center) {
        Dataset ds;
        ds.x = x;
        return standardize(ds, center).x;
      },
      py::arg("x"), py::arg("center") = false,
      "Scale columns to unit variance (zero-variance columns untouched).");
}
