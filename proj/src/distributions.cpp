#include "evkmeans/distributions.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace evkmeans {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_params(double mu, double sigma, double xi, const char* what) {
  if (!std::isfinite(mu) || !std::isfinite(sigma) || !std::isfinite(xi) ||
      sigma <= 0.0) {
    throw std::invalid_argument(std::string(what) +
                                " requires finite parameters and sigma > 0");
  }
}

void check_quantile_level(double q) {
  if (!(q > 0.0 && q < 1.0)) {
    throw std::invalid_argument("quantile level must lie in (0, 1)");
  }
}

}  // namespace

Support gev_support(const GevParams& p) {
  check_params(p.mu, p.sigma, p.xi, "gev");
  if (p.xi > kXiEps) return {p.mu - p.sigma / p.xi, kInf};
  if (p.xi < -kXiEps) return {-kInf, p.mu - p.sigma / p.xi};
  return {-kInf, kInf};
}

Support gpd_support(const GpdParams& p) {
  check_params(p.mu, p.sigma, p.xi, "gpd");
  if (p.xi < -kXiEps) return {p.mu, p.mu - p.sigma / p.xi};
  return {p.mu, kInf};
}

double gev_cdf(const GevParams& p, double x) {
  check_params(p.mu, p.sigma, p.xi, "gev");
  const double z = (x - p.mu) / p.sigma;
  if (std::abs(p.xi) < kXiEps) {
    return std::exp(-std::exp(-z));
  }
  const double t = 1.0 + p.xi * z;
  if (t <= 0.0) {
    // Outside the support: below the lower endpoint for xi > 0, above the
    // upper endpoint for xi < 0.
    return p.xi > 0.0 ? 0.0 : 1.0;
  }
  return std::exp(-std::exp(-std::log1p(p.xi * z) / p.xi));
}

double gpd_cdf(const GpdParams& p, double x) {
  check_params(p.mu, p.sigma, p.xi, "gpd");
  if (x < p.mu) return 0.0;
  const double z = (x - p.mu) / p.sigma;
  if (std::abs(p.xi) < kXiEps) {
    return -std::expm1(-z);
  }
  const double t = 1.0 + p.xi * z;
  if (t <= 0.0) return 1.0;  // only reachable for xi < 0, past the endpoint
  return -std::expm1(-std::log1p(p.xi * z) / p.xi);
}

double gev_log_density(const GevParams& p, double x) {
  check_params(p.mu, p.sigma, p.xi, "gev");
  const double z = (x - p.mu) / p.sigma;
  if (std::abs(p.xi) < kXiEps) {
    return -std::log(p.sigma) - z - std::exp(-z);
  }
  const double t = 1.0 + p.xi * z;
  if (t <= 0.0) return -kInf;
  const double lt = std::log1p(p.xi * z);
  return -std::log(p.sigma) - (1.0 + 1.0 / p.xi) * lt - std::exp(-lt / p.xi);
}

double gpd_log_density(const GpdParams& p, double x) {
  check_params(p.mu, p.sigma, p.xi, "gpd");
  if (x < p.mu) return -kInf;
  const double z = (x - p.mu) / p.sigma;
  if (std::abs(p.xi) < kXiEps) {
    return -std::log(p.sigma) - z;
  }
  const double t = 1.0 + p.xi * z;
  if (t <= 0.0) return -kInf;
  return -std::log(p.sigma) - (1.0 + 1.0 / p.xi) * std::log1p(p.xi * z);
}

// Both likelihoods are the optimizer's inner loop, so the per-point work is
// expressed over Eigen arrays instead of per-point density calls.
double gev_neg_log_likelihood(const GevParams& p, std::span<const double> m) {
  if (m.empty()) {
    throw std::invalid_argument("gev_neg_log_likelihood requires a non-empty sample");
  }
  check_params(p.mu, p.sigma, p.xi, "gev");
  const Eigen::Map<const Eigen::ArrayXd> xs(m.data(),
                                            static_cast<Eigen::Index>(m.size()));
  const double n = static_cast<double>(m.size());
  if (std::abs(p.xi) < kXiEps) {
    const Eigen::ArrayXd z = (xs - p.mu) / p.sigma;
    return n * std::log(p.sigma) + z.sum() + (-z).exp().sum();
  }
  const Eigen::ArrayXd t = 1.0 + (p.xi / p.sigma) * (xs - p.mu);
  if ((t <= 0.0).any()) return kInf;
  const Eigen::ArrayXd lt = t.log();
  return n * std::log(p.sigma) + (1.0 + 1.0 / p.xi) * lt.sum() +
         (lt * (-1.0 / p.xi)).exp().sum();
}

double gpd_neg_log_likelihood(const GpdParams& p, std::span<const double> y) {
  if (y.empty()) {
    throw std::invalid_argument("gpd_neg_log_likelihood requires a non-empty sample");
  }
  check_params(p.mu, p.sigma, p.xi, "gpd");
  const Eigen::Map<const Eigen::ArrayXd> xs(y.data(),
                                            static_cast<Eigen::Index>(y.size()));
  if ((xs < p.mu).any()) return kInf;
  const double n = static_cast<double>(y.size());
  if (std::abs(p.xi) < kXiEps) {
    return n * std::log(p.sigma) + ((xs - p.mu) / p.sigma).sum();
  }
  const Eigen::ArrayXd t = 1.0 + (p.xi / p.sigma) * (xs - p.mu);
  if ((t <= 0.0).any()) return kInf;
  return n * std::log(p.sigma) + (1.0 + 1.0 / p.xi) * t.log().sum();
}

double gev_quantile(const GevParams& p, double q) {
  check_params(p.mu, p.sigma, p.xi, "gev");
  check_quantile_level(q);
  const double w = -std::log(q);
  if (std::abs(p.xi) < kXiEps) {
    return p.mu - p.sigma * std::log(w);
  }
  // (w^-xi - 1) / xi computed through expm1 to stay accurate near xi = 0.
  return p.mu + p.sigma / p.xi * std::expm1(-p.xi * std::log(w));
}

double gpd_quantile(const GpdParams& p, double q) {
  check_params(p.mu, p.sigma, p.xi, "gpd");
  check_quantile_level(q);
  const double l1mq = std::log1p(-q);
  if (std::abs(p.xi) < kXiEps) {
    return p.mu - p.sigma * l1mq;
  }
  return p.mu + p.sigma / p.xi * std::expm1(-p.xi * l1mq);
}

std::vector<double> sample_gev(const GevParams& p, std::size_t n, Rng& rng) {
  check_params(p.mu, p.sigma, p.xi, "gev");
  std::vector<double> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(gev_quantile(p, rng.uniform_open()));
  }
  return out;
}

std::vector<double> sample_gpd(const GpdParams& p, std::size_t n, Rng& rng) {
  check_params(p.mu, p.sigma, p.xi, "gpd");
  std::vector<double> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(gpd_quantile(p, rng.uniform_open()));
  }
  return out;
}

}  // namespace evkmeans
