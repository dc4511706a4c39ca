#include "wsum/sum_engine.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "wsum/errors.hpp"
#include "wsum/parallel.hpp"
#include "wsum/quadrature.hpp"

namespace wsum {

std::string to_string(CdfMethod m) {
  switch (m) {
    case CdfMethod::ExactExpMixture: return "ExactExpMixture";
    case CdfMethod::MonteCarloCRN: return "MonteCarloCRN";
    case CdfMethod::Quadrature: return "Quadrature";
    case CdfMethod::ClosedForm: return "ClosedForm";
  }
  return "?";
}

CdfMethod cdf_method_from_string(const std::string& s) {
  for (auto m : {CdfMethod::ExactExpMixture, CdfMethod::MonteCarloCRN, CdfMethod::Quadrature, CdfMethod::ClosedForm})
    if (to_string(m) == s) return m;
  throw std::invalid_argument("unknown cdf method '" + s + "'");
}

std::string to_string(Direction d) {
  return d == Direction::LeftLeqStRight ? "LeftLeqStRight" : "RightLeqStLeft";
}

Direction direction_from_string(const std::string& s) {
  if (s == "LeftLeqStRight") return Direction::LeftLeqStRight;
  if (s == "RightLeqStLeft") return Direction::RightLeqStLeft;
  throw std::invalid_argument("unknown direction '" + s + "'");
}

// ---------------------------------------------------------------------------
// Monte Carlo

SampleMatrix draw_sample_matrix(const DistributionSpec& d, Eigen::Index n, std::size_t n_samples,
                                std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("sample matrix needs at least one column");
  SampleMatrix y(static_cast<Eigen::Index>(n_samples), n);
  const std::size_t blocks = (n_samples + kBlockSize - 1) / kBlockSize;
  parallel_for_blocks(blocks, [&](std::size_t b) {
    SeededStream stream(seed, b);
    const auto first = static_cast<Eigen::Index>(b * kBlockSize);
    const auto last = static_cast<Eigen::Index>(std::min(n_samples, (b + 1) * kBlockSize));
    for (Eigen::Index r = first; r < last; ++r)
      for (Eigen::Index c = 0; c < n; ++c) y(r, c) = d.draw(stream);
  });
  return y;
}

Eigen::VectorXd weighted_sums(const SampleMatrix& samples, const WeightVector& a) {
  if (samples.cols() != a.size()) throw std::invalid_argument("weighted_sums: weight length does not match samples");
  return samples * a.values();
}

CdfCurve empirical_cdf(Eigen::VectorXd sums, const Eigen::VectorXd& t_grid, std::uint64_t seed) {
  std::sort(sums.begin(), sums.end());
  const auto n = static_cast<double>(sums.size());
  CdfCurve curve;
  curve.t = t_grid;
  curve.value.resize(t_grid.size());
  curve.se.resize(t_grid.size());
  for (Eigen::Index k = 0; k < t_grid.size(); ++k) {
    const auto count = std::upper_bound(sums.begin(), sums.end(), t_grid[k]) - sums.begin();
    const double v = static_cast<double>(count) / n;
    // continuity-adjusted proportion keeps the error positive at 0 and 1
    const double adj = (static_cast<double>(count) + 0.5) / (n + 1.0);
    curve.value[k] = v;
    curve.se[k] = std::sqrt(adj * (1.0 - adj) / n);
  }
  curve.method = CdfMethod::MonteCarloCRN;
  curve.seed = seed;
  curve.n_samples = static_cast<std::size_t>(sums.size());
  return curve;
}

Eigen::VectorXd linear_grid(double lo, double hi, std::size_t count) {
  if (count < 2 || !(hi > lo)) throw std::invalid_argument("linear_grid: need count >= 2 and hi > lo");
  return Eigen::VectorXd::LinSpaced(static_cast<Eigen::Index>(count), lo, hi);
}

Eigen::VectorXd auto_t_grid(const std::vector<const Eigen::VectorXd*>& sums, std::size_t count,
                            bool positive_only) {
  std::vector<double> pooled;
  for (const auto* s : sums) pooled.insert(pooled.end(), s->begin(), s->end());
  if (pooled.size() < 2) throw std::invalid_argument("auto_t_grid: not enough samples");
  const double last = static_cast<double>(pooled.size() - 1);
  const auto lo_idx = static_cast<std::size_t>(std::floor(0.005 * last));
  const auto hi_idx = static_cast<std::size_t>(std::ceil(0.995 * last));
  std::nth_element(pooled.begin(), pooled.begin() + static_cast<std::ptrdiff_t>(hi_idx), pooled.end());
  const double hi = pooled[hi_idx];
  std::nth_element(pooled.begin(), pooled.begin() + static_cast<std::ptrdiff_t>(lo_idx),
                   pooled.begin() + static_cast<std::ptrdiff_t>(hi_idx));
  const double lo = pooled[lo_idx];
  if (positive_only) {
    if (!(hi > 0.0)) throw std::invalid_argument("auto_t_grid: no positive mass for a t > 0 grid");
    return Eigen::VectorXd::LinSpaced(static_cast<Eigen::Index>(count), hi / static_cast<double>(count), hi);
  }
  if (!(hi > lo)) return Eigen::VectorXd::Constant(1, hi);
  return linear_grid(lo, hi, count);
}

CdfCurve mc_cdf(const DistributionSpec& d, const WeightVector& a, const Eigen::VectorXd& t_grid,
                std::size_t n_samples, std::uint64_t seed) {
  if (n_samples < 1000) throw std::invalid_argument("mc_cdf: n_samples must be at least 1000");
  const auto samples = draw_sample_matrix(d, a.size(), n_samples, seed);
  Eigen::VectorXd sums = weighted_sums(samples, a);
  const Eigen::VectorXd grid = t_grid.size() > 0 ? t_grid : auto_t_grid({&sums});
  return empirical_cdf(std::move(sums), grid, seed);
}

// ---------------------------------------------------------------------------
// Exact exponential mixture

double exact_exp_mixture_cdf(const WeightVector& a, double t) {
  const auto& w = a.values();
  const Eigen::Index n = w.size();
  if (!a.strictly_positive()) throw std::invalid_argument("exact_exp_mixture_cdf: weights must be positive");
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j)
      if (std::abs(w[i] - w[j]) <= 1e-12 * std::max(w[i], w[j]))
        throw std::invalid_argument("exact_exp_mixture_cdf: repeated weights; use quadrature instead");
  if (!(t > 0.0)) return 0.0;
  if (std::isinf(t)) return 1.0;
  double tail = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    double coef = std::pow(w[i], static_cast<double>(n - 1));
    for (Eigen::Index j = 0; j < n; ++j)
      if (j != i) coef /= (w[i] - w[j]);
    tail += coef * std::exp(-t / w[i]);
  }
  return 1.0 - tail;
}

CdfCurve exact_exp_mixture_curve(const WeightVector& a, const Eigen::VectorXd& t_grid) {
  CdfCurve c;
  c.t = t_grid;
  c.value = t_grid.unaryExpr([&](double t) { return exact_exp_mixture_cdf(a, t); });
  c.se = Eigen::VectorXd::Zero(t_grid.size());
  c.method = CdfMethod::ExactExpMixture;
  return c;
}

// ---------------------------------------------------------------------------
// Quadrature

namespace {

struct EffectiveRange {
  double lo;
  double hi;
};

// Mass outside [lo, hi] is below 1e-14 on each side.
EffectiveRange effective_range(const DistributionSpec& d) {
  return {d.quantile(1e-14), d.quantile(1.0 - 1e-14)};
}

// integral over log y of g(y) f(y) y, for y in [lo, hi]; the log substitution
// tames the y^{alpha - 1} singularities at zero. The range is split at the
// interior breakpoints, where g may have kinks.
template <class G>
double integrate_against_density(const DistributionSpec& d, double lo, double hi, const G& g, double tol,
                                 std::vector<double> breaks = {}) {
  if (!(hi > lo)) return 0.0;
  auto integrand = [&](double s) {
    const double y = std::exp(s);
    const double w = std::exp(d.log_density(y) + s);
    return w == 0.0 ? 0.0 : g(y) * w;
  };
  std::erase_if(breaks, [&](double b) { return !(b > lo && b < hi); });
  std::sort(breaks.begin(), breaks.end());
  breaks.insert(breaks.begin(), lo);
  breaks.push_back(hi);
  const double piece_tol = tol / static_cast<double>(breaks.size() - 1);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
    total += quad::integrate(integrand, std::log(breaks[i]), std::log(breaks[i + 1]), piece_tol).value;
  return total;
}

// Only the uniform family has a finite upper end, where the conditional
// distribution functions below stop growing.
bool bounded_above(const DistributionSpec& d) { return d.family() == Family::Uniform; }

double two_sum_cdf(const DistributionSpec& d, const EffectiveRange& r, double a_inner, double a_outer,
                   double t, double tol) {
  if (!(t > 0.0)) return 0.0;
  const double upper = std::min(r.hi, t / a_outer);
  std::vector<double> breaks;
  if (bounded_above(d)) breaks.push_back((t - a_inner * d.param(0)) / a_outer);
  return integrate_against_density(
      d, r.lo, upper, [&](double y) { return d.cdf((t - a_outer * y) / a_inner); }, tol, std::move(breaks));
}

double three_sum_cdf(const DistributionSpec& d, const EffectiveRange& r, double a1, double a2, double a3,
                     double t, double tol) {
  if (!(t > 0.0)) return 0.0;
  const double upper = std::min(r.hi, t / a3);
  std::vector<double> breaks;
  if (bounded_above(d)) {
    // kinks of the two-term distribution function at a1 s, a2 s, (a1 + a2) s
    for (double c : {a1, a2, a1 + a2}) breaks.push_back((t - c * d.param(0)) / a3);
  }
  return integrate_against_density(
      d, r.lo, upper, [&](double y) { return two_sum_cdf(d, r, a1, a2, t - a3 * y, 0.05 * tol); }, tol,
      std::move(breaks));
}

}  // namespace

double quad_cdf_point(const DistributionSpec& d, const WeightVector& a, double t, double abs_tol) {
  if (!d.positive_support()) throw std::invalid_argument("quad_cdf: only positive-support families are supported");
  std::vector<double> w;
  for (double v : a.values())
    if (v > 0.0) w.push_back(v);
  if (w.size() > 3) throw std::invalid_argument("quad_cdf: unsupported dimension (more than three nonzero weights)");
  std::sort(w.begin(), w.end());  // largest weight integrated outermost
  if (t < 0.0) return 0.0;
  switch (w.size()) {
    case 0: return 1.0;
    case 1: return d.cdf(t / w[0]);
    case 2: return two_sum_cdf(d, effective_range(d), w[0], w[1], t, abs_tol);
    default: return three_sum_cdf(d, effective_range(d), w[0], w[1], w[2], t, abs_tol);
  }
}

CdfCurve quad_cdf(const DistributionSpec& d, const WeightVector& a, const Eigen::VectorXd& t_grid) {
  CdfCurve c;
  c.t = t_grid;
  c.value = t_grid.unaryExpr([&](double t) { return std::clamp(quad_cdf_point(d, a, t), 0.0, 1.0); });
  c.se = Eigen::VectorXd::Zero(t_grid.size());
  c.method = CdfMethod::Quadrature;
  return c;
}

// ---------------------------------------------------------------------------
// Dominance

DominanceReport dominance_test(const CdfCurve& lower, const CdfCurve& upper, double z) {
  if (lower.t.size() != upper.t.size() || lower.t != upper.t)
    throw std::invalid_argument("dominance_test: curves use different t grids");
  const bool exact = lower.exact() && upper.exact();
  const double slack = exact ? kExactSlack : 0.0;
  DominanceReport r;
  r.direction = Direction::LeftLeqStRight;
  r.worst_margin = std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k < lower.t.size(); ++k) {
    const double diff = lower.value[k] - upper.value[k];
    const double margin = exact ? diff : diff + z * std::hypot(lower.se[k], upper.se[k]);
    r.worst_margin = std::min(r.worst_margin, margin);
    if (margin < -slack && !r.violating_t) r.violating_t = lower.t[k];
  }
  if (lower.t.size() == 0) r.worst_margin = 0.0;
  r.holds = r.worst_margin >= -slack;
  r.tolerance_rule = exact ? "exact: difference >= -1e-12"
                           : "difference + z * sqrt(se1^2 + se2^2) >= 0, z = " + std::to_string(z);
  return r;
}

void require_condition(const DistributionSpec& d, const PremiseMode& mode) {
  ConditionReport rep;
  std::string what;
  switch (mode.kind()) {
    case PremiseMode::Kind::Thm1Log:
      rep = check_theorem1_condition(d);
      what = "f(e^x) must be log-concave in x";
      break;
    case PremiseMode::Kind::Thm2Power:
      rep = check_theorem2_condition(d, mode.p());
      what = "min{0, 2/p - 1} log x + log f(x^{1/p}) must be concave";
      break;
    case PremiseMode::Kind::KrPower:
      rep = check_kr_condition(d, mode.p());
      what = "Y^p must have a log-concave density";
      break;
    case PremiseMode::Kind::Thm4Identity:
      rep = check_theorem4_condition(d);
      what = "density must be log-concave and symmetric about zero";
      break;
  }
  if (!rep.holds) {
    throw PreconditionError(mode.theorem_name() + " condition",
                            what + " (" + d.to_string() + (rep.notes.empty() ? "" : "; " + rep.notes) + ")");
  }
}

namespace {

WeightVector sorted_descending(const WeightVector& w) {
  Eigen::VectorXd v = w.values();
  std::sort(v.begin(), v.end(), std::greater<>());
  return WeightVector(std::move(v));
}

}  // namespace

WeightedSumComparison compare_weighted_sums(const DistributionSpec& d, const WeightVector& a,
                                            const WeightVector& b, const PremiseMode& mode,
                                            const Eigen::VectorXd& t_grid, std::size_t n_samples,
                                            std::uint64_t seed, double z) {
  if (a.size() != b.size()) throw std::invalid_argument("compare_weighted_sums: weight vectors differ in length");
  if (n_samples < 1000) throw std::invalid_argument("compare_weighted_sums: n_samples must be at least 1000");
  const std::string premise = mode.theorem_name() + " premise";
  bool ok = false;
  try {
    ok = premise_holds(a, b, mode);
  } catch (const std::invalid_argument& e) {
    throw PreconditionError(premise, e.what());
  }
  if (!ok) throw PreconditionError(premise, "transformed a is not majorized by transformed b under " + mode.to_string());
  require_condition(d, mode);
  const bool positive_t = mode.kind() == PremiseMode::Kind::Thm4Identity;
  if (positive_t && (t_grid.array() <= 0.0).any())
    throw PreconditionError("Theorem 4 premise", "the comparison grid must be restricted to t > 0");

  const auto samples = draw_sample_matrix(d, a.size(), n_samples, seed);
  Eigen::VectorXd sums_a = weighted_sums(samples, sorted_descending(a));
  Eigen::VectorXd sums_b = weighted_sums(samples, sorted_descending(b));
  const Eigen::VectorXd grid = t_grid.size() > 0 ? t_grid : auto_t_grid({&sums_a, &sums_b}, kDefaultGridPoints, positive_t);

  WeightedSumComparison out;
  out.curve_a = empirical_cdf(std::move(sums_a), grid, seed);
  out.curve_b = empirical_cdf(std::move(sums_b), grid, seed);
  if (mode.kind() == PremiseMode::Kind::Thm2Power) {
    out.report = dominance_test(out.curve_b, out.curve_a, z);
    out.report.direction = Direction::RightLeqStLeft;
  } else {
    out.report = dominance_test(out.curve_a, out.curve_b, z);
  }
  return out;
}

CapacityEstimate expected_log_capacity(const DistributionSpec& d, const WeightVector& a, std::size_t n_samples,
                                       std::uint64_t seed) {
  if (n_samples < 1000) throw std::invalid_argument("expected_log_capacity: n_samples must be at least 1000");
  if (!d.positive_support()) throw std::invalid_argument("expected_log_capacity: requires a positive-support family");
  if (a.all_zero()) return {0.0, 0.0};
  const auto samples = draw_sample_matrix(d, a.size(), n_samples, seed);
  const Eigen::ArrayXd values = weighted_sums(samples, a).array().log1p();
  const double mean = values.mean();
  const double var = (values - mean).square().sum() / static_cast<double>(values.size() - 1);
  return {mean, std::sqrt(var / static_cast<double>(values.size()))};
}

}  // namespace wsum
