#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "evkmeans/distributions.hpp"

using namespace evkmeans;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol; }

// Independent root-finder: invert a CDF by bisection, ignoring the quantile
// implementation entirely.
template <class Cdf>
double bisect_quantile(const Cdf& cdf, double q, double lo, double hi) {
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (cdf(mid) < q) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Central finite difference of the CDF as a density oracle.
template <class Cdf>
double fd_density(const Cdf& cdf, double x, double h = 1e-5) {
  return (cdf(x + h) - cdf(x - h)) / (2.0 * h);
}

const std::vector<GevParams> kGevGrid = {
    {0.0, 1.0, 0.0},  {0.0, 1.0, 0.2},  {0.0, 1.0, -0.2}, {1.5, 0.3, 0.7},
    {-2.0, 2.5, -0.6}, {0.5, 0.05, 0.1}, {3.0, 4.0, -1.2}, {-1.0, 0.7, 1.4},
};
const std::vector<GpdParams> kGpdGrid = {
    {0.0, 1.0, 0.0},  {0.0, 1.0, 0.2},  {0.0, 1.0, -0.5}, {1.0, 2.0, -0.5},
    {-3.0, 0.4, 0.8}, {2.0, 5.0, -0.9}, {0.0, 0.02, 0.05}, {1.0, 3.0, 1.5},
};

}  // namespace

TEST_CASE("gev_cdf matches hand-computed values") {
  CHECK(gev_cdf({0.0, 1.0, 0.0}, 0.0) == std::exp(-1.0));  // H(mu) = e^-1 exactly
  CHECK(gev_cdf({0.0, 1.0, 0.2}, 0.0) == std::exp(-1.0));
  CHECK(gev_cdf({0.0, 1.0, -0.7}, 0.0) == std::exp(-1.0));
  // Gumbel at z = 1: exp(-exp(-1))
  CHECK(close(gev_cdf({0.0, 1.0, 0.0}, 1.0), std::exp(-std::exp(-1.0)), 1e-15));
  // xi = 0.5 at x = 2: (1 + 0.5*2)^(-2) = 1/4, H = exp(-1/4)
  CHECK(close(gev_cdf({0.0, 1.0, 0.5}, 2.0), std::exp(-0.25), 1e-15));
}

TEST_CASE("gev_cdf saturates outside the support") {
  // xi > 0: zero at and below mu - sigma/xi
  CHECK(gev_cdf({0.0, 1.0, 0.5}, -2.0) == 0.0);
  CHECK(gev_cdf({0.0, 1.0, 0.5}, -5.0) == 0.0);
  // xi < 0: one at and above mu - sigma/xi
  CHECK(gev_cdf({0.0, 1.0, -0.5}, 2.0) == 1.0);
  CHECK(gev_cdf({0.0, 1.0, -0.5}, 9.0) == 1.0);
}

TEST_CASE("gpd_cdf matches hand-computed values") {
  CHECK(gpd_cdf({0.0, 1.0, 0.0}, 0.0) == 0.0);  // G(mu) = 0 exactly
  CHECK(gpd_cdf({0.0, 1.0, 0.4}, 0.0) == 0.0);
  CHECK(close(gpd_cdf({0.0, 1.0, 0.0}, 1.0), 1.0 - std::exp(-1.0), 1e-15));
  // xi = -0.5: G(x) = 1 - (1 - x/2)^2 on [0, 2]
  CHECK(close(gpd_cdf({0.0, 1.0, -0.5}, 1.0), 0.75, 1e-15));
  CHECK(gpd_cdf({0.0, 1.0, -0.5}, 2.0) == 1.0);   // upper endpoint
  CHECK(gpd_cdf({0.0, 1.0, -0.5}, 3.0) == 1.0);   // beyond it
  CHECK(gpd_cdf({0.0, 1.0, 0.5}, -0.1) == 0.0);   // below location
}

TEST_CASE("cdfs are monotone and bounded on random parameter draws") {
  for (const auto& p : kGevGrid) {
    double prev = -1.0;
    for (double x = -30.0; x <= 30.0; x += 0.25) {
      const double c = gev_cdf(p, x);
      CHECK(c >= 0.0);
      CHECK(c <= 1.0);
      CHECK(c >= prev);
      prev = c;
    }
  }
  for (const auto& p : kGpdGrid) {
    double prev = -1.0;
    for (double x = -30.0; x <= 30.0; x += 0.25) {
      const double c = gpd_cdf(p, x);
      CHECK(c >= 0.0);
      CHECK(c <= 1.0);
      CHECK(c >= prev);
      prev = c;
    }
  }
}

TEST_CASE("xi near zero agrees with the exponential and Gumbel limit forms") {
  for (const double xi : {1e-9, -1e-9}) {
    for (double x = 0.0; x <= 8.0; x += 0.5) {
      CHECK(close(gpd_cdf({0.0, 1.0, xi}, x), -std::expm1(-x), 1e-6));
      CHECK(close(gev_cdf({0.0, 1.0, xi}, x - 3.0),
                  std::exp(-std::exp(-(x - 3.0))), 1e-6));
    }
  }
  // Just above the branch threshold the generic formulas take over; they must
  // still be continuous against the limit forms.
  for (const double xi : {1e-7, -1e-7}) {
    for (double x = 0.0; x <= 8.0; x += 0.5) {
      CHECK(close(gpd_cdf({0.0, 1.0, xi}, x), -std::expm1(-x), 1e-6));
      CHECK(close(gev_cdf({0.0, 1.0, xi}, x - 3.0),
                  std::exp(-std::exp(-(x - 3.0))), 1e-6));
    }
  }
}

TEST_CASE("support endpoints") {
  const Support s1 = gev_support({0.0, 1.0, 0.5});
  CHECK(s1.lower == -2.0);
  CHECK(s1.upper == kInf);
  const Support s2 = gev_support({0.0, 1.0, -0.5});
  CHECK(s2.lower == -kInf);
  CHECK(s2.upper == 2.0);
  const Support s3 = gev_support({0.0, 1.0, 0.0});
  CHECK(s3.lower == -kInf);
  CHECK(s3.upper == kInf);
  const Support s4 = gpd_support({1.0, 2.0, -0.5});
  CHECK(s4.lower == 1.0);
  CHECK(s4.upper == 5.0);
  const Support s5 = gpd_support({1.0, 2.0, 0.3});
  CHECK(s5.lower == 1.0);
  CHECK(s5.upper == kInf);
}

TEST_CASE("gpd negative log-likelihood worked examples") {
  const std::vector<double> y123 = {1.0, 2.0, 3.0};
  CHECK(close(gpd_neg_log_likelihood({0.0, 1.0, 0.0}, y123), 6.0, 1e-12));
  const std::vector<double> y2 = {2.0};
  CHECK(close(gpd_neg_log_likelihood({0.0, 2.0, 0.0}, y2), std::log(2.0) + 1.0, 1e-12));
  const std::vector<double> yneg = {-1.0};
  CHECK(gpd_neg_log_likelihood({0.0, 1.0, 0.5}, yneg) == kInf);
  // xi < 0 support violation: y beyond sigma/|xi|
  const std::vector<double> yfar = {3.0};
  CHECK(gpd_neg_log_likelihood({0.0, 1.0, -0.5}, yfar) == kInf);
}

TEST_CASE("gev negative log-likelihood worked examples") {
  const std::vector<double> zero = {0.0};
  CHECK(close(gev_neg_log_likelihood({0.0, 1.0, 0.0}, zero), 1.0, 1e-12));
  // Support violation for xi = 1: x < mu - sigma
  const std::vector<double> mtwo = {-2.0};
  CHECK(gev_neg_log_likelihood({0.0, 1.0, 1.0}, mtwo) == kInf);
}

TEST_CASE("likelihoods agree with finite differences of the cdf") {
  const GevParams pg{0.0, 1.0, 0.2};
  const std::vector<double> m = {0.5, 1.0};
  double oracle = 0.0;
  for (const double x : m) {
    oracle -= std::log(fd_density([&](double v) { return gev_cdf(pg, v); }, x));
  }
  CHECK(close(gev_neg_log_likelihood(pg, m), oracle, 1e-6));

  const GpdParams pp{0.0, 1.5, 0.3};
  const std::vector<double> y = {0.4, 1.1, 2.7};
  oracle = 0.0;
  for (const double x : y) {
    oracle -= std::log(fd_density([&](double v) { return gpd_cdf(pp, v); }, x));
  }
  CHECK(close(gpd_neg_log_likelihood(pp, y), oracle, 1e-6));
}

TEST_CASE("log densities agree with finite differences across the grid") {
  for (const auto& p : kGevGrid) {
    for (double x = -6.0; x <= 6.0; x += 0.7) {
      const double ld = gev_log_density(p, x);
      if (!std::isfinite(ld) || ld < -25.0) continue;  // FD unusable near zero density
      const double fd = fd_density([&](double v) { return gev_cdf(p, v); }, x);
      CHECK(close(std::exp(ld), fd, 2e-4 * std::max(1.0, std::exp(ld))));
    }
  }
  for (const auto& p : kGpdGrid) {
    for (double x = -1.0; x <= 6.0; x += 0.5) {
      const double ld = gpd_log_density(p, x);
      if (!std::isfinite(ld) || ld < -25.0) continue;
      if (std::abs(x - p.mu) < 1e-3) continue;  // density jump at the location
      const double fd = fd_density([&](double v) { return gpd_cdf(p, v); }, x);
      CHECK(close(std::exp(ld), fd, 2e-4 * std::max(1.0, std::exp(ld))));
    }
  }
}

TEST_CASE("quantile worked examples") {
  CHECK(close(gpd_quantile({0.0, 1.0, 0.0}, 1.0 - std::exp(-1.0)), 1.0, 1e-12));
  // Oracle: solve G(x) = 0.75 for (mu=1, sigma=2, xi=-0.5) by bisection on
  // the cdf; analytically 1 - (1 - 0.25(x-1))^2 = 0.75 gives x = 3.
  const GpdParams p{1.0, 2.0, -0.5};
  const double oracle =
      bisect_quantile([&](double v) { return gpd_cdf(p, v); }, 0.75, 1.0, 5.0);
  CHECK(close(oracle, 3.0, 1e-9));
  CHECK(close(gpd_quantile(p, 0.75), 3.0, 1e-12));

  CHECK(close(gev_quantile({0.0, 1.0, 0.0}, std::exp(-1.0)), 0.0, 1e-15));
  CHECK(close(gev_quantile({0.0, 1.0, 0.3}, std::exp(-1.0)), 0.0, 1e-15));

  // Gumbel median via bisection: -log(log 2)
  const GevParams gum{0.0, 1.0, 0.0};
  const double med =
      bisect_quantile([&](double v) { return gev_cdf(gum, v); }, 0.5, -5.0, 5.0);
  CHECK(close(med, -std::log(std::log(2.0)), 1e-9));
  CHECK(close(gev_quantile(gum, 0.5), -std::log(std::log(2.0)), 1e-12));
}

TEST_CASE("quantile and cdf round-trip within 1e-10") {
  for (const auto& p : kGevGrid) {
    for (double q = 0.01; q < 0.995; q += 0.01) {
      CHECK(close(gev_cdf(p, gev_quantile(p, q)), q, 1e-10));
    }
  }
  for (const auto& p : kGpdGrid) {
    for (double q = 0.01; q < 0.995; q += 0.01) {
      CHECK(close(gpd_cdf(p, gpd_quantile(p, q)), q, 1e-10));
    }
  }
}

TEST_CASE("sampling is deterministic and respects the support") {
  Rng r1(42), r2(42);
  const GevParams p{0.5, 2.0, -0.5};
  const auto a = sample_gev(p, 500, r1);
  const auto b = sample_gev(p, 500, r2);
  CHECK(a == b);
  const Support s = gev_support(p);
  for (const double v : a) {
    CHECK(v >= s.lower);
    CHECK(v <= s.upper);
  }
}

TEST_CASE("sample_gev with xi=-0.5 never exceeds the upper endpoint") {
  Rng rng(7);
  const auto xs = sample_gev({0.0, 1.0, -0.5}, 100000, rng);
  CHECK(*std::max_element(xs.begin(), xs.end()) <= 2.0);
}

TEST_CASE("monte carlo mean of unit exponential gpd draws") {
  Rng rng(11);
  const auto xs = sample_gpd({0.0, 1.0, 0.0}, 100000, rng);
  double mean = 0.0;
  for (const double v : xs) mean += v;
  mean /= static_cast<double>(xs.size());
  CHECK(close(mean, 1.0, 0.02));
}

TEST_CASE("parameter and argument validation") {
  CHECK_THROWS_AS(gev_cdf({0.0, 0.0, 0.1}, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(gev_cdf({0.0, -1.0, 0.1}, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(gpd_cdf({0.0, 1.0, std::nan("")}, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(gpd_quantile({0.0, 1.0, 0.0}, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(gpd_quantile({0.0, 1.0, 0.0}, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(gev_quantile({0.0, 1.0, 0.0}, -0.2), std::invalid_argument);
  const std::vector<double> empty;
  CHECK_THROWS_AS(gev_neg_log_likelihood({0.0, 1.0, 0.0}, empty), std::invalid_argument);
  CHECK_THROWS_AS(gpd_neg_log_likelihood({0.0, 1.0, 0.0}, empty), std::invalid_argument);
}
