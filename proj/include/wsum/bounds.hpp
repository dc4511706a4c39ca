#pragma once

#include <cmath>
#include <stdexcept>

#include <Eigen/Core>

#include "wsum/distributions.hpp"
#include "wsum/majorization.hpp"
#include "wsum/sum_engine.hpp"

namespace wsum {

// (prod b_i)^{1/n}; all entries must be positive.
template <class Derived>
double geometric_mean_weight(const Eigen::DenseBase<Derived>& b) {
  if (b.size() < 1) throw std::invalid_argument("geometric_mean_weight: empty vector");
  if (!(b.derived().array() > 0.0).all())
    throw std::invalid_argument("geometric_mean_weight: zero weight makes the bound vacuous");
  return std::exp(b.derived().array().log().mean());
}

// (n^{-1} sum b_i^q)^{1/q}, q > 1; zero entries allowed.
template <class Derived>
double power_mean_weight(const Eigen::DenseBase<Derived>& b, double q) {
  if (b.size() < 1) throw std::invalid_argument("power_mean_weight: empty vector");
  if (!(q > 0.0)) throw std::invalid_argument("power_mean_weight: q must be positive");
  if ((b.derived().array() < 0.0).any()) throw std::invalid_argument("power_mean_weight: negative weight");
  // factor out the largest entry so large q cannot overflow
  const double top = b.derived().maxCoeff();
  if (top == 0.0) return 0.0;
  return top * std::pow((b.derived().array() / top).pow(q).mean(), 1.0 / q);
}

struct SumCdfValue {
  double value = 0.0;
  double std_error = 0.0;
};

// Pr(Y_1 + ... + Y_n <= t): closed form for gamma (the sum is gamma(n alpha,
// beta)), quadrature for n <= 3, Monte Carlo beyond that.
SumCdfValue sum_of_iid_cdf(const DistributionSpec& d, std::size_t n, double t,
                           std::size_t n_samples = kDefaultSamples, std::uint64_t seed = 0);

// Pr(scale * (Y_1 + ... + Y_n) <= t) on a grid, by the same method choice.
CdfCurve scaled_sum_curve(const DistributionSpec& d, std::size_t n, double scale, const Eigen::VectorXd& t_grid,
                          std::size_t n_samples = kDefaultSamples, std::uint64_t seed = 0);

// Upper bound Pr(b_* sum Y_i <= t) with the geometric mean b_*.
CdfCurve geometric_upper_bound_curve(const DistributionSpec& d, const WeightVector& b, const Eigen::VectorXd& t_grid,
                                     std::size_t n_samples = kDefaultSamples, std::uint64_t seed = 0);
// Lower bound Pr(b^* sum Y_i <= t) with the q-power mean b^*.
CdfCurve power_lower_bound_curve(const DistributionSpec& d, const WeightVector& b, double q,
                                 const Eigen::VectorXd& t_grid, std::size_t n_samples = kDefaultSamples,
                                 std::uint64_t seed = 0);

struct BoundReport {
  double b_star_geo = 0.0;
  double b_star_pow = 0.0;
  double q = 0.0;
  CdfCurve upper_curve;
  CdfCurve lower_curve;
  CdfCurve target_curve;
  bool holds = false;
  double worst_margin = 0.0;
  std::optional<double> violating_t;
};

// Two-sided bound lower <= Pr(sum a_i Y_i <= t) <= upper. d must satisfy the
// theorem 1 condition and the theorem 2 condition at p = q / (q - 1). The
// target is estimated by Monte Carlo; an empty t_grid selects the automatic
// grid of the target sum.
BoundReport sandwich(const DistributionSpec& d, const WeightVector& a, double q, const Eigen::VectorXd& t_grid,
                     std::size_t n_samples = kDefaultSamples, std::uint64_t seed = 0, double z = kDefaultZ);

}  // namespace wsum
