#include "wsum/distributions.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <utility>

#include "wsum/errors.hpp"
#include "wsum/special_functions.hpp"

namespace wsum {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const double kLogSqrt2Pi = 0.5 * std::log(2.0 * std::numbers::pi);

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v))
    throw std::invalid_argument(std::string("distribution parameter ") + name +
                                " must be a positive finite number");
}

// Acklam's rational approximation refined by one Halley step.
double inverse_normal_cdf(double u) {
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  if (u <= 0.0) return -kInf;
  if (u >= 1.0) return kInf;
  constexpr double plow = 0.02425;
  double x;
  if (u < plow) {
    const double q = std::sqrt(-2.0 * std::log(u));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (u <= 1.0 - plow) {
    const double q = u - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log1p(-u));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  // Halley refinement against the tail that is representable accurately
  const double err = (u < 0.5) ? special::normal_cdf(x) - u : (1.0 - u) - special::normal_cdf(-x);
  const double dens = std::exp(-0.5 * x * x - kLogSqrt2Pi);
  const double step = err / dens;
  return x - step / (1.0 + 0.5 * x * step);
}

// Solves cdf(y) = u on (0, inf) by bisection in log y. Upper-half targets are
// matched against the survival function to keep precision near 1.
double positive_quantile_by_bisection(const DistributionSpec& d, double u) {
  const bool upper = u > 0.5;
  const double target = upper ? 1.0 - u : u;
  auto below_target = [&](double y) {
    return upper ? d.survival(y) > target : d.cdf(y) < target;
  };
  double lo = 1.0;
  double hi = 1.0;
  while (below_target(lo) == false && lo > 1e-300) lo *= 0.5;
  while (below_target(hi) && hi < 1e300) hi *= 2.0;
  double log_lo = std::log(lo);
  double log_hi = std::log(hi);
  for (int i = 0; i < 200 && log_hi - log_lo > 1e-15 * std::max(1.0, std::abs(log_hi)); ++i) {
    const double mid = 0.5 * (log_lo + log_hi);
    if (below_target(std::exp(mid)))
      log_lo = mid;
    else
      log_hi = mid;
  }
  return std::exp(0.5 * (log_lo + log_hi));
}

struct FamilyGrammar {
  std::string_view name;
  Family family;
  std::array<std::string_view, 2> keys;
  std::size_t arity;
};

constexpr std::array<FamilyGrammar, 7> kGrammar = {{
    {"uniform", Family::Uniform, {"s", ""}, 1},
    {"gamma", Family::Gamma, {"alpha", "beta"}, 2},
    {"lognormal", Family::LogNormal, {"mu", "sigma"}, 2},
    {"weibull", Family::Weibull, {"p", ""}, 1},
    {"genrayleigh", Family::GenRayleigh, {"nu", ""}, 1},
    {"normal0", Family::Normal0, {"sigma", ""}, 1},
    {"laplace0", Family::Laplace0, {"scale", ""}, 1},
}};

std::string format_number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace

DistributionSpec::DistributionSpec(Family family, double p0, double p1)
    : family_(family), params_{p0, p1} {
  switch (family_) {
    case Family::Uniform:
      require_positive(p0, "s");
      log_norm_ = -std::log(p0);
      break;
    case Family::Gamma:
      require_positive(p0, "alpha");
      require_positive(p1, "beta");
      log_norm_ = -special::log_gamma(p0) - p0 * std::log(p1);
      break;
    case Family::LogNormal:
      if (!std::isfinite(p0)) throw std::invalid_argument("lognormal mu must be finite");
      require_positive(p1, "sigma");
      log_norm_ = -std::log(p1) - kLogSqrt2Pi;
      break;
    case Family::Weibull:
      require_positive(p0, "p");
      log_norm_ = std::log(p0);
      break;
    case Family::GenRayleigh:
      require_positive(p0, "nu");
      // 1 / (2^{nu/2 - 1} Gamma(nu/2))
      log_norm_ = -(0.5 * p0 - 1.0) * std::numbers::ln2 - special::log_gamma(0.5 * p0);
      break;
    case Family::Normal0:
      require_positive(p0, "sigma");
      log_norm_ = -std::log(p0) - kLogSqrt2Pi;
      break;
    case Family::Laplace0:
      require_positive(p0, "scale");
      log_norm_ = -std::log(2.0 * p0);
      break;
  }
}

DistributionSpec DistributionSpec::uniform(double s) { return {Family::Uniform, s, 0.0}; }
DistributionSpec DistributionSpec::gamma(double alpha, double beta) {
  return {Family::Gamma, alpha, beta};
}
DistributionSpec DistributionSpec::lognormal(double mu, double sigma) {
  return {Family::LogNormal, mu, sigma};
}
DistributionSpec DistributionSpec::weibull(double p) { return {Family::Weibull, p, 0.0}; }
DistributionSpec DistributionSpec::gen_rayleigh(double nu) {
  return {Family::GenRayleigh, nu, 0.0};
}
DistributionSpec DistributionSpec::normal0(double sigma) { return {Family::Normal0, sigma, 0.0}; }
DistributionSpec DistributionSpec::laplace0(double scale) {
  return {Family::Laplace0, scale, 0.0};
}

DistributionSpec DistributionSpec::parse(std::string_view text) {
  const std::string input(text);
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) throw ParseError(input, text.size(), "expected ':' after family name");
  const auto name = text.substr(0, colon);
  const auto it = std::find_if(kGrammar.begin(), kGrammar.end(),
                               [&](const FamilyGrammar& g) { return g.name == name; });
  if (it == kGrammar.end()) throw ParseError(input, 0, "unknown family '" + std::string(name) + "'");

  std::array<double, 2> values{0.0, 0.0};
  std::array<bool, 2> seen{false, false};
  std::size_t pos = colon + 1;
  while (pos <= text.size()) {
    const auto comma = std::min(text.find(',', pos), text.size());
    const auto item = text.substr(pos, comma - pos);
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) throw ParseError(input, pos, "expected key=value");
    const auto key = item.substr(0, eq);
    std::size_t slot = it->arity;
    for (std::size_t k = 0; k < it->arity; ++k)
      if (it->keys[k] == key) slot = k;
    if (slot == it->arity)
      throw ParseError(input, pos, "unknown parameter '" + std::string(key) + "' for " + std::string(name));
    if (seen[slot]) throw ParseError(input, pos, "duplicate parameter '" + std::string(key) + "'");
    const auto number = item.substr(eq + 1);
    const std::size_t num_pos = pos + eq + 1;
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(number.data(), number.data() + number.size(), v);
    if (ec != std::errc() || ptr != number.data() + number.size() || number.empty())
      throw ParseError(input, num_pos + static_cast<std::size_t>(ptr - number.data()), "expected a number");
    values[slot] = v;
    seen[slot] = true;
    pos = comma + 1;
  }
  for (std::size_t k = 0; k < it->arity; ++k)
    if (!seen[k]) throw ParseError(input, text.size(), "missing parameter '" + std::string(it->keys[k]) + "'");
  try {
    return DistributionSpec(it->family, values[0], values[1]);
  } catch (const std::invalid_argument& e) {
    throw ParseError(input, colon + 1, e.what());
  }
}

std::string DistributionSpec::to_string() const {
  const auto& g = *std::find_if(kGrammar.begin(), kGrammar.end(),
                                [&](const FamilyGrammar& x) { return x.family == family_; });
  std::string out(g.name);
  out += ':';
  for (std::size_t k = 0; k < g.arity; ++k) {
    if (k) out += ',';
    out += g.keys[k];
    out += '=';
    out += format_number(params_[k]);
  }
  return out;
}

bool DistributionSpec::positive_support() const noexcept {
  return family_ != Family::Normal0 && family_ != Family::Laplace0;
}

bool DistributionSpec::symmetric() const noexcept { return !positive_support(); }

double DistributionSpec::log_density(double y) const {
  const double a = params_[0];
  const double b = params_[1];
  if (positive_support() && !(y > 0.0)) return -kInf;
  if (std::isinf(y)) return -kInf;
  switch (family_) {
    case Family::Uniform:
      return y < a ? log_norm_ : -kInf;
    case Family::Gamma:
      return log_norm_ + (a - 1.0) * std::log(y) - y / b;
    case Family::LogNormal: {
      const double z = (std::log(y) - a) / b;
      return log_norm_ - std::log(y) - 0.5 * z * z;
    }
    case Family::Weibull:
      return log_norm_ + (a - 1.0) * std::log(y) - std::pow(y, a);
    case Family::GenRayleigh:
      return log_norm_ + (a - 1.0) * std::log(y) - 0.5 * y * y;
    case Family::Normal0: {
      const double z = y / a;
      return log_norm_ - 0.5 * z * z;
    }
    case Family::Laplace0:
      return log_norm_ - std::abs(y) / a;
  }
  return -kInf;
}

double DistributionSpec::cdf(double y) const {
  const double a = params_[0];
  const double b = params_[1];
  if (std::isnan(y)) return y;
  if (positive_support() && y <= 0.0) return 0.0;
  switch (family_) {
    case Family::Uniform:
      return std::min(1.0, y / a);
    case Family::Gamma:
      return special::gamma_p(a, y / b);
    case Family::LogNormal:
      return special::normal_cdf((std::log(y) - a) / b);
    case Family::Weibull:
      return -std::expm1(-std::pow(y, a));
    case Family::GenRayleigh:
      return special::gamma_p(0.5 * a, 0.5 * y * y);
    case Family::Normal0:
      return special::normal_cdf(y / a);
    case Family::Laplace0:
      return y < 0.0 ? 0.5 * std::exp(y / a) : 1.0 - 0.5 * std::exp(-y / a);
  }
  return 0.0;
}

double DistributionSpec::survival(double y) const {
  const double a = params_[0];
  const double b = params_[1];
  if (std::isnan(y)) return y;
  if (positive_support() && y <= 0.0) return 1.0;
  switch (family_) {
    case Family::Uniform:
      return std::max(0.0, 1.0 - y / a);
    case Family::Gamma:
      return special::gamma_q(a, y / b);
    case Family::LogNormal:
      return special::normal_cdf(-(std::log(y) - a) / b);
    case Family::Weibull:
      return std::exp(-std::pow(y, a));
    case Family::GenRayleigh:
      return special::gamma_q(0.5 * a, 0.5 * y * y);
    case Family::Normal0:
      return special::normal_cdf(-y / a);
    case Family::Laplace0:
      return y < 0.0 ? 1.0 - 0.5 * std::exp(y / a) : 0.5 * std::exp(-y / a);
  }
  return 0.0;
}

double DistributionSpec::quantile(double u) const {
  if (!(u >= 0.0 && u <= 1.0)) throw std::invalid_argument("quantile level must lie in [0, 1]");
  const double a = params_[0];
  const double b = params_[1];
  if (u == 0.0) return positive_support() ? 0.0 : -kInf;
  if (u == 1.0) return family_ == Family::Uniform ? a : kInf;
  switch (family_) {
    case Family::Uniform:
      return a * u;
    case Family::Weibull:
      return std::pow(-std::log1p(-u), 1.0 / a);
    case Family::LogNormal:
      return std::exp(a + b * inverse_normal_cdf(u));
    case Family::Normal0:
      return a * inverse_normal_cdf(u);
    case Family::Laplace0:
      return u < 0.5 ? a * std::log(2.0 * u) : -a * std::log(2.0 * (1.0 - u));
    case Family::Gamma:
    case Family::GenRayleigh:
      return positive_quantile_by_bisection(*this, u);
  }
  return 0.0;
}

double DistributionSpec::draw(SeededStream& stream) const {
  const double a = params_[0];
  const double b = params_[1];
  switch (family_) {
    case Family::Uniform:
      return a * stream.uniform();
    case Family::Gamma:
      return b * stream.standard_gamma(a);
    case Family::LogNormal:
      return std::exp(a + b * stream.standard_normal());
    case Family::Weibull:
      return std::pow(stream.standard_exponential(), 1.0 / a);
    case Family::GenRayleigh:
      return std::sqrt(2.0 * stream.standard_gamma(0.5 * a));
    case Family::Normal0:
      return a * stream.standard_normal();
    case Family::Laplace0: {
      const double u = stream.uniform();
      return u < 0.5 ? a * std::log(2.0 * u) : -a * std::log(2.0 * (1.0 - u));
    }
  }
  return 0.0;
}

double density(const DistributionSpec& d, double y) { return std::exp(d.log_density(y)); }
double cdf(const DistributionSpec& d, double y) { return d.cdf(y); }
double quantile(const DistributionSpec& d, double u) { return d.quantile(u); }

Eigen::VectorXd sample(const DistributionSpec& d, SeededStream& stream, std::size_t n) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(n));
  for (auto& v : out) v = d.draw(stream);
  return out;
}

// ---------------------------------------------------------------------------

std::string to_string(ConditionId id) {
  switch (id) {
    case ConditionId::Thm1: return "Thm1";
    case ConditionId::Thm2: return "Thm2";
    case ConditionId::ThmKR: return "ThmKR";
    case ConditionId::Thm4: return "Thm4";
  }
  return "?";
}

ConditionId condition_id_from_string(std::string_view s) {
  for (auto id : {ConditionId::Thm1, ConditionId::Thm2, ConditionId::ThmKR, ConditionId::Thm4})
    if (to_string(id) == s) return id;
  throw std::invalid_argument("unknown condition id '" + std::string(s) + "'");
}

std::vector<double> log_spaced(double lo, double hi, std::size_t count) {
  if (!(lo > 0.0) || !(hi > lo) || count < 3) throw std::invalid_argument("log_spaced: need 0 < lo < hi, count >= 3");
  std::vector<double> out(count);
  const double a = std::log(lo);
  const double step = (std::log(hi) - a) / static_cast<double>(count - 1);
  for (std::size_t k = 0; k < count; ++k) out[k] = std::exp(a + step * static_cast<double>(k));
  out.back() = hi;
  return out;
}

ConditionReport check_concavity(ConditionId id, std::vector<double> grid,
                                const std::function<double(double)>& phi) {
  ConditionReport report;
  report.condition_id = id;
  std::vector<double> values(grid.size());
  std::transform(grid.begin(), grid.end(), values.begin(), phi);

  double worst = kInf;
  std::size_t worst_k = 0;
  for (std::size_t k = 1; k + 1 < grid.size(); ++k) {
    const double left = values[k - 1];
    const double mid = values[k];
    const double right = values[k + 1];
    double defect;
    if (std::isinf(mid) && mid < 0.0) {
      defect = (std::isinf(left) && std::isinf(right)) ? 0.0 : -kInf;
    } else if (std::isinf(left) || std::isinf(right)) {
      defect = kInf;
    } else {
      const double w = (grid[k + 1] - grid[k]) / (grid[k + 1] - grid[k - 1]);
      defect = (mid - (w * left + (1.0 - w) * right)) / std::max(1.0, std::abs(mid));
    }
    if (defect < worst) {
      worst = defect;
      worst_k = k;
    }
  }
  report.worst_violation = std::isinf(worst) && worst > 0.0 ? 0.0 : worst;
  report.holds = report.worst_violation >= -kConcavityTolerance;
  if (!report.holds) {
    report.notes = "violating triple at x = (" + format_number(grid[worst_k - 1]) + ", " +
                   format_number(grid[worst_k]) + ", " + format_number(grid[worst_k + 1]) + ")";
  }
  report.grid = std::move(grid);
  return report;
}

namespace {

ConditionReport unsupported(ConditionId id, double p, const std::string& why) {
  ConditionReport r;
  r.condition_id = id;
  r.p = p;
  r.holds = false;
  r.worst_violation = -kInf;
  r.notes = why;
  return r;
}

std::pair<double, double> central_range(const DistributionSpec& d) {
  return {d.quantile(1e-6), d.quantile(1.0 - 1e-6)};
}

}  // namespace

ConditionReport check_theorem1_condition(const DistributionSpec& d, std::size_t grid_size) {
  if (!d.positive_support()) return unsupported(ConditionId::Thm1, 0.0, "support is not (0, inf)");
  const auto [lo, hi] = central_range(d);
  std::vector<double> grid(grid_size);
  const double a = std::log(lo);
  const double step = (std::log(hi) - a) / static_cast<double>(grid_size - 1);
  for (std::size_t k = 0; k < grid_size; ++k) grid[k] = a + step * static_cast<double>(k);
  return check_concavity(ConditionId::Thm1, std::move(grid),
                         [&](double x) { return d.log_density(std::exp(x)); });
}

ConditionReport check_theorem2_condition(const DistributionSpec& d, double p, std::size_t grid_size) {
  if (!(p > 1.0)) throw std::invalid_argument("theorem 2 condition requires p > 1");
  if (!d.positive_support()) return unsupported(ConditionId::Thm2, p, "support is not (0, inf)");
  const auto [lo, hi] = central_range(d);
  const double weight = std::min(0.0, 2.0 / p - 1.0);
  auto report = check_concavity(ConditionId::Thm2, log_spaced(std::pow(lo, p), std::pow(hi, p), grid_size),
                                [&](double x) {
                                  return weight * std::log(x) + d.log_density(std::pow(x, 1.0 / p));
                                });
  report.p = p;
  return report;
}

ConditionReport check_kr_condition(const DistributionSpec& d, double p, std::size_t grid_size) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("Karlin-Rinott condition requires 0 < p < 1");
  if (!d.positive_support()) return unsupported(ConditionId::ThmKR, p, "support is not (0, inf)");
  const auto [lo, hi] = central_range(d);
  auto report = check_concavity(ConditionId::ThmKR, log_spaced(std::pow(lo, p), std::pow(hi, p), grid_size),
                                [&](double x) {
                                  return -std::log(p) + (1.0 / p - 1.0) * std::log(x) +
                                         d.log_density(std::pow(x, 1.0 / p));
                                });
  report.p = p;
  return report;
}

ConditionReport check_theorem4_condition(const DistributionSpec& d, std::size_t grid_size) {
  if (!d.symmetric()) return unsupported(ConditionId::Thm4, 0.0, "density is not symmetric about zero");
  const auto [lo, hi] = central_range(d);
  std::vector<double> grid(grid_size);
  const double step = (hi - lo) / static_cast<double>(grid_size - 1);
  for (std::size_t k = 0; k < grid_size; ++k) grid[k] = lo + step * static_cast<double>(k);
  return check_concavity(ConditionId::Thm4, std::move(grid), [&](double y) { return d.log_density(y); });
}

}  // namespace wsum
