#include "wsum/bounds.hpp"

#include <algorithm>
#include <limits>

#include "wsum/errors.hpp"
#include "wsum/special_functions.hpp"

namespace wsum {

SumCdfValue sum_of_iid_cdf(const DistributionSpec& d, std::size_t n, double t, std::size_t n_samples,
                           std::uint64_t seed) {
  const auto curve = scaled_sum_curve(d, n, 1.0, Eigen::VectorXd::Constant(1, t), n_samples, seed);
  return {curve.value[0], curve.se[0]};
}

CdfCurve scaled_sum_curve(const DistributionSpec& d, std::size_t n, double scale, const Eigen::VectorXd& t_grid,
                          std::size_t n_samples, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("sum_of_iid_cdf: n must be at least 1");
  if (!(scale > 0.0)) throw std::invalid_argument("sum_of_iid_cdf: scale must be positive");
  const auto size = static_cast<Eigen::Index>(n);
  if (d.family() == Family::Gamma) {
    CdfCurve c;
    c.t = t_grid;
    const double shape = static_cast<double>(n) * d.param(0);
    const double gamma_scale = d.param(1) * scale;
    c.value = t_grid.unaryExpr([&](double t) { return special::gamma_p(shape, t / gamma_scale); });
    c.se = Eigen::VectorXd::Zero(t_grid.size());
    c.method = CdfMethod::ClosedForm;
    return c;
  }
  if (n == 1) {
    CdfCurve c;
    c.t = t_grid;
    c.value = t_grid.unaryExpr([&](double t) { return d.cdf(t / scale); });
    c.se = Eigen::VectorXd::Zero(t_grid.size());
    c.method = CdfMethod::ClosedForm;
    return c;
  }
  const WeightVector equal(Eigen::VectorXd::Constant(size, scale));
  if (n <= 3 && d.positive_support()) return quad_cdf(d, equal, t_grid);
  return mc_cdf(d, equal, t_grid, n_samples, seed);
}

CdfCurve geometric_upper_bound_curve(const DistributionSpec& d, const WeightVector& b, const Eigen::VectorXd& t_grid,
                                     std::size_t n_samples, std::uint64_t seed) {
  return scaled_sum_curve(d, static_cast<std::size_t>(b.size()), geometric_mean_weight(b.values()), t_grid,
                          n_samples, seed);
}

CdfCurve power_lower_bound_curve(const DistributionSpec& d, const WeightVector& b, double q,
                                 const Eigen::VectorXd& t_grid, std::size_t n_samples, std::uint64_t seed) {
  return scaled_sum_curve(d, static_cast<std::size_t>(b.size()), power_mean_weight(b.values(), q), t_grid,
                          n_samples, seed);
}

BoundReport sandwich(const DistributionSpec& d, const WeightVector& a, double q, const Eigen::VectorXd& t_grid,
                     std::size_t n_samples, std::uint64_t seed, double z) {
  if (!(q > 1.0)) throw std::invalid_argument("sandwich: q must exceed 1");
  if (!a.strictly_positive()) throw PreconditionError("Bound premise", "all weights must be positive");
  const double p = q / (q - 1.0);
  require_condition(d, PremiseMode::thm1());
  require_condition(d, PremiseMode::thm2(p));

  BoundReport r;
  r.q = q;
  r.b_star_geo = geometric_mean_weight(a.values());
  r.b_star_pow = power_mean_weight(a.values(), q);

  const auto samples = draw_sample_matrix(d, a.size(), n_samples, seed);
  Eigen::VectorXd sums = weighted_sums(samples, a);
  const Eigen::VectorXd grid = t_grid.size() > 0 ? t_grid : auto_t_grid({&sums});
  r.target_curve = empirical_cdf(std::move(sums), grid, seed);
  // bound curves use an independent seed when they fall back to Monte Carlo
  const auto n = static_cast<std::size_t>(a.size());
  r.upper_curve = scaled_sum_curve(d, n, r.b_star_geo, grid, n_samples, seed + 1);
  r.lower_curve = scaled_sum_curve(d, n, r.b_star_pow, grid, n_samples, seed + 2);

  r.worst_margin = std::numeric_limits<double>::infinity();
  const auto& tg = r.target_curve;
  for (Eigen::Index k = 0; k < grid.size(); ++k) {
    const double below = tg.value[k] - r.lower_curve.value[k] + z * std::hypot(tg.se[k], r.lower_curve.se[k]);
    const double above = r.upper_curve.value[k] - tg.value[k] + z * std::hypot(tg.se[k], r.upper_curve.se[k]);
    const double margin = std::min(below, above);
    r.worst_margin = std::min(r.worst_margin, margin);
    if (margin < 0.0 && !r.violating_t) r.violating_t = grid[k];
  }
  r.holds = r.worst_margin >= 0.0;
  return r;
}

}  // namespace wsum
