#include "wsum/appendix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "wsum/errors.hpp"
#include "wsum/majorization.hpp"
#include "wsum/sum_engine.hpp"

namespace wsum {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double scaled(double lhs, double rhs) {
  return (lhs - rhs) / std::max({1.0, std::abs(lhs), std::abs(rhs)});
}

std::string describe(const MappingContext& ctx, std::size_t resolution) {
  std::ostringstream os;
  os << "p=" << ctx.p << " beta=" << ctx.beta << " t=" << ctx.t << " y: " << resolution << " interior points of (0, y0)";
  return os.str();
}

std::vector<double> point(const MappingContext& ctx, double y) { return {ctx.p, ctx.beta, ctx.t, y}; }

void require_open_lower_branch(const MappingContext& ctx, double y) {
  if (!(y > 0.0 && y < ctx.y0)) throw std::out_of_range("y must lie in (0, y0)");
}

}  // namespace

MappingContext MappingContext::make(double p, double beta, double t) {
  if (!(p > 1.0) || !std::isfinite(p)) throw std::invalid_argument("MappingContext: p must exceed 1");
  if (!(beta >= 0.5 && beta < 1.0)) throw std::invalid_argument("MappingContext: beta must lie in [1/2, 1)");
  if (!(t > 0.0) || !std::isfinite(t)) throw std::invalid_argument("MappingContext: t must be positive");
  MappingContext c{};
  c.p = p;
  c.q = p / (p - 1.0);
  c.beta = beta;
  c.t = t;
  c.y0 = t * std::pow(1.0 - beta, 1.0 / p);
  c.y1 = t * std::pow(1.0 - beta, -1.0 / c.q);
  c.delta = std::min(0.0, 2.0 - p);
  return c;
}

double big_l(const MappingContext& ctx, double y) {
  if (!(y >= 0.0 && y <= ctx.y1)) throw std::out_of_range("big_l: y must lie in [0, y1]");
  const double r = ctx.p / ctx.q;
  return std::pow(ctx.beta, r) * std::pow(y, ctx.p) + std::pow(1.0 - ctx.beta, r) * std::pow(ctx.y1 - y, ctx.p);
}

double x_of_y(const MappingContext& ctx, double y) {
  if (!(y > 0.0 && y < ctx.y1)) throw std::out_of_range("x_of_y: y must lie in (0, y1)");
  return std::pow(1.0 / ctx.beta - 1.0, 1.0 / ctx.q) * (ctx.y1 - y);
}

double tilde_map(const MappingContext& ctx, double y) {
  require_open_lower_branch(ctx, y);
  const double target = big_l(ctx, y);
  double lo = ctx.y0 * (1.0 + 1e-12);
  double hi = ctx.y1 * (1.0 - 1e-12);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (big_l(ctx, mid) < target)
      lo = mid;
    else
      hi = mid;
  }
  return std::abs(big_l(ctx, lo) - target) <= std::abs(big_l(ctx, hi) - target) ? lo : hi;
}

TildeDerivative tilde_derivative(const MappingContext& ctx, double y) {
  require_open_lower_branch(ctx, y);
  const double h = 1e-6 * ctx.y0;
  if (std::abs(y - ctx.y0) < h) {
    const double centre = std::min(y, ctx.y0 - 2.0 * h);
    return {(tilde_map(ctx, centre + h) - tilde_map(ctx, centre - h)) / (2.0 * h), true};
  }
  const double r = ctx.p / ctx.q;
  const double yt = tilde_map(ctx, y);
  const double num = std::pow(ctx.beta * y, r) - std::pow((1.0 - ctx.beta) * (ctx.y1 - y), r);
  const double den = std::pow(ctx.beta * yt, r) - std::pow((1.0 - ctx.beta) * (ctx.y1 - yt), r);
  return {num / den, false};
}

double q_alpha(double alpha, double u, double v) {
  if (!(u > 0.0 && v > 0.0)) throw std::invalid_argument("q_alpha: arguments must be positive");
  if (std::abs(u - v) <= 1e-12 * std::max(u, v)) return alpha * std::pow(u, alpha - 1.0);
  // (u^a - v^a) / (u - v) = v^{a-1} expm1(a r) / expm1(r), r = log(u / v)
  const double r = std::log(u / v);
  return std::pow(v, alpha - 1.0) * std::expm1(alpha * r) / std::expm1(r);
}

// ---------------------------------------------------------------------------

std::string to_string(ClaimId id) {
  switch (id) {
    case ClaimId::Thm1Kernel: return "Thm1Kernel";
    case ClaimId::HBetaMonotone1: return "HBetaMonotone1";
    case ClaimId::HBetaMonotone2: return "HBetaMonotone2";
    case ClaimId::Claim1: return "Claim1";
    case ClaimId::Claim2: return "Claim2";
    case ClaimId::Claim3uv1: return "Claim3uv1";
    case ClaimId::Claim3uv2: return "Claim3uv2";
    case ClaimId::KeyIneq: return "KeyIneq";
    case ClaimId::QAlphaMono: return "QAlphaMono";
    case ClaimId::HPrimeIntegrand: return "HPrimeIntegrand";
  }
  return "?";
}

ClaimId claim_id_from_string(const std::string& s) {
  for (auto id : {ClaimId::Thm1Kernel, ClaimId::HBetaMonotone1, ClaimId::HBetaMonotone2, ClaimId::Claim1,
                  ClaimId::Claim2, ClaimId::Claim3uv1, ClaimId::Claim3uv2, ClaimId::KeyIneq, ClaimId::QAlphaMono,
                  ClaimId::HPrimeIntegrand})
    if (to_string(id) == s) return id;
  throw std::invalid_argument("unknown claim id '" + s + "'");
}

void ClaimReport::observe(double margin, std::vector<double> at) {
  if (worst_point.empty() || margin < worst_margin) {
    worst_margin = margin;
    worst_point = std::move(at);
  }
}

void ClaimReport::merge(const ClaimReport& other) {
  if (other.worst_point.empty()) return;
  if (worst_point.empty() || other.worst_margin < worst_margin) {
    worst_margin = other.worst_margin;
    worst_point = other.worst_point;
  }
  if (!other.notes.empty()) notes += (notes.empty() ? "" : "; ") + other.notes;
}

void ClaimReport::finalize() {
  if (worst_point.empty()) {
    worst_margin = 0.0;
    if (notes.empty()) notes = "no admissible grid points";
  }
  holds = worst_margin >= -kClaimTolerance;
}

std::vector<double> interior_y_grid(const MappingContext& ctx, std::size_t resolution) {
  std::vector<double> ys(resolution);
  for (std::size_t k = 0; k < resolution; ++k)
    ys[k] = ctx.y0 * static_cast<double>(k + 1) / static_cast<double>(resolution + 1);
  return ys;
}

ClaimReport verify_claim1(const MappingContext& ctx, std::size_t y_resolution) {
  ClaimReport r;
  r.claim_id = ClaimId::Claim1;
  r.grid = describe(ctx, y_resolution);
  const double l0 = big_l(ctx, 0.0);
  const double l1 = big_l(ctx, ctx.y1);
  r.observe(scaled(l1, l0), point(ctx, 0.0));
  double max_residual = 0.0;
  for (double y : interior_y_grid(ctx, y_resolution)) {
    const double yt = tilde_map(ctx, y);
    const double ly = big_l(ctx, y);
    const double residual = std::abs(big_l(ctx, yt) - ly) / std::max(1.0, ly);
    max_residual = std::max(max_residual, residual);
    const double margin = std::min({scaled(yt, ctx.y0), scaled(ctx.y1, yt), kTildeResidual - residual});
    r.observe(margin, point(ctx, y));
  }
  std::ostringstream os;
  os << "max relative bisection residual " << max_residual;
  r.notes = os.str();
  r.finalize();
  return r;
}

ClaimReport verify_claim2(const MappingContext& ctx, std::size_t y_resolution) {
  ClaimReport r;
  r.claim_id = ClaimId::Claim2;
  r.grid = describe(ctx, y_resolution);
  bool substituted = false;
  for (double y : interior_y_grid(ctx, y_resolution)) {
    const double yt = tilde_map(ctx, y);
    const auto deriv = tilde_derivative(ctx, y);
    substituted |= deriv.finite_difference;
    const double lhs = std::abs(deriv.value);
    const double ratio = (x_of_y(ctx, yt) * yt) / (x_of_y(ctx, y) * y);
    const double rhs = std::pow(ratio, ctx.delta) * (ctx.y0 - y) / (yt - ctx.y0);
    r.observe(scaled(lhs, rhs), point(ctx, y));
  }
  if (substituted) r.notes = "finite-difference derivative used near y0";
  r.finalize();
  return r;
}

Claim3Reports verify_claim3(const MappingContext& ctx, std::size_t y_resolution) {
  Claim3Reports out;
  out.uv1.claim_id = ClaimId::Claim3uv1;
  out.uv2.claim_id = ClaimId::Claim3uv2;
  out.key_ineq.claim_id = ClaimId::KeyIneq;
  out.uv1.grid = out.uv2.grid = out.key_ineq.grid = describe(ctx, y_resolution);
  const double b = ctx.beta;
  for (double y : interior_y_grid(ctx, y_resolution)) {
    const double yt = tilde_map(ctx, y);
    const double u = b * y;
    const double v = (1.0 - b) * (ctx.y1 - y);
    const double ut = b * yt;
    const double vt = (1.0 - b) * (ctx.y1 - yt);
    out.uv1.observe(scaled(ut, v), point(ctx, y));
    out.uv2.observe(scaled(vt, u), point(ctx, y));
    const double reflected = std::clamp((1.0 / b - 1.0) * (ctx.y1 - y), 0.0, ctx.y1);
    out.key_ineq.observe(scaled(big_l(ctx, y), big_l(ctx, reflected)), point(ctx, y));
  }
  out.uv1.finalize();
  out.uv2.finalize();
  out.key_ineq.finalize();
  return out;
}

ClaimReport hprime_integrand_check(const MappingContext& ctx, const DistributionSpec& d, std::size_t y_resolution) {
  const auto cond = check_theorem2_condition(d, ctx.p);
  if (!cond.holds)
    throw PreconditionError("Theorem 2 condition", d.to_string() + " fails the concavity condition at p = " +
                                                       std::to_string(ctx.p));
  ClaimReport r;
  r.claim_id = ClaimId::HPrimeIntegrand;
  r.grid = d.to_string() + " " + describe(ctx, y_resolution);
  for (double y : interior_y_grid(ctx, y_resolution)) {
    const double yt = tilde_map(ctx, y);
    const double xs = x_of_y(ctx, y);
    const double xt = x_of_y(ctx, yt);
    const double f_xt = d.log_density(xt);
    const double f_yt = d.log_density(yt);
    const double f_xs = d.log_density(xs);
    const double f_ys = d.log_density(y);
    if (std::isinf(f_xt) || std::isinf(f_yt) || std::isinf(f_xs) || std::isinf(f_ys)) continue;
    const double lhs = ctx.delta * std::log(xt * yt) + f_xt + f_yt;
    const double rhs = ctx.delta * std::log(xs * y) + f_xs + f_ys;
    r.observe(scaled(lhs, rhs), point(ctx, y));
  }
  r.finalize();
  return r;
}

ClaimReport verify_qalpha_monotonicity(const std::vector<double>& alpha_grid, const std::vector<double>& uv_grid) {
  ClaimReport r;
  r.claim_id = ClaimId::QAlphaMono;
  r.grid = std::to_string(alpha_grid.size()) + " alphas x " + std::to_string(uv_grid.size()) + "^2 (u, v) pairs";
  std::vector<double> g = uv_grid;
  std::sort(g.begin(), g.end());
  for (double alpha : alpha_grid) {
    const double sign = alpha > 1.0 ? 1.0 : -1.0;
    for (double v : g) {
      for (std::size_t i = 0; i + 1 < g.size(); ++i) {
        const double lo = q_alpha(alpha, g[i], v);
        const double hi = q_alpha(alpha, g[i + 1], v);
        r.observe(sign * scaled(hi, lo), {alpha, g[i], g[i + 1], v});
        // second argument, first held fixed
        const double lo2 = q_alpha(alpha, v, g[i]);
        const double hi2 = q_alpha(alpha, v, g[i + 1]);
        r.observe(sign * scaled(hi2, lo2), {alpha, v, g[i], g[i + 1]});
      }
    }
  }
  r.finalize();
  return r;
}

ClaimReport verify_thm1_kernel(const DistributionSpec& d, const std::vector<double>& beta_grid,
                               const std::vector<double>& t_grid, std::size_t y_resolution) {
  require_condition(d, PremiseMode::thm1());
  ClaimReport r;
  r.claim_id = ClaimId::Thm1Kernel;
  r.grid = d.to_string() + " " + std::to_string(beta_grid.size()) + " betas x " + std::to_string(t_grid.size()) +
           " t values x " + std::to_string(y_resolution) + " y points";
  std::size_t evaluated = 0;
  for (double beta : beta_grid) {
    if (!(beta > 0.0 && beta <= 1.0)) throw std::invalid_argument("verify_thm1_kernel: beta must lie in (0, 1]");
    for (double t : t_grid) {
      const double y_max = t / (2.0 * beta);
      for (std::size_t k = 1; k <= y_resolution; ++k) {
        const double y = y_max * static_cast<double>(k) / static_cast<double>(y_resolution + 1);
        const double fa = d.log_density(t * beta - beta * beta * y);
        const double fb = d.log_density(y);
        const double fc = d.log_density(beta * beta * y);
        const double fd = d.log_density(t / beta - y);
        if (std::isinf(fa) || std::isinf(fb) || std::isinf(fc) || std::isinf(fd)) continue;
        ++evaluated;
        r.observe(scaled(fa + fb, fc + fd), {beta, t, y});
      }
    }
  }
  r.notes = std::to_string(evaluated) + " points with positive densities";
  r.finalize();
  return r;
}

double h_beta_thm1(const DistributionSpec& d, double t, double beta) {
  if (!(beta > 0.0 && beta <= 1.0)) throw std::invalid_argument("h_beta_thm1: beta must lie in (0, 1]");
  require_condition(d, PremiseMode::thm1());
  return quad_cdf_point(d, WeightVector{1.0 / beta, beta}, t, 1e-10);
}

double h_beta_thm2(const DistributionSpec& d, double p, double t, double beta) {
  if (!(beta >= 0.5 && beta <= 1.0)) throw std::invalid_argument("h_beta_thm2: beta must lie in [1/2, 1]");
  const auto mode = PremiseMode::thm2(p);
  require_condition(d, mode);
  const double q = mode.q();
  return quad_cdf_point(d, WeightVector{std::pow(beta, 1.0 / q), std::pow(1.0 - beta, 1.0 / q)}, t, 1e-10);
}

namespace {

template <class H>
ClaimReport monotone_in_beta(ClaimId id, const std::string& label, double t, const std::vector<double>& betas,
                             const H& h) {
  ClaimReport r;
  r.claim_id = id;
  r.grid = label + " t=" + std::to_string(t) + " " + std::to_string(betas.size()) + " betas";
  std::vector<double> values(betas.size());
  for (std::size_t k = 0; k < betas.size(); ++k) values[k] = h(betas[k]);
  for (std::size_t k = 0; k + 1 < betas.size(); ++k)
    r.observe(values[k + 1] - values[k] + kHBetaTolerance, {t, betas[k], betas[k + 1]});
  r.finalize();
  return r;
}

}  // namespace

ClaimReport verify_h_beta_thm1(const DistributionSpec& d, double t, const std::vector<double>& beta_grid) {
  require_condition(d, PremiseMode::thm1());
  return monotone_in_beta(ClaimId::HBetaMonotone1, d.to_string(), t, beta_grid, [&](double beta) {
    return quad_cdf_point(d, WeightVector{1.0 / beta, beta}, t, 1e-10);
  });
}

ClaimReport verify_h_beta_thm2(const DistributionSpec& d, double p, double t, const std::vector<double>& beta_grid) {
  const auto mode = PremiseMode::thm2(p);
  require_condition(d, mode);
  const double q = mode.q();
  return monotone_in_beta(ClaimId::HBetaMonotone2, d.to_string() + " p=" + std::to_string(p), t, beta_grid,
                          [&](double beta) {
                            return quad_cdf_point(
                                d, WeightVector{std::pow(beta, 1.0 / q), std::pow(1.0 - beta, 1.0 / q)}, t, 1e-10);
                          });
}

std::vector<ClaimReport> run_appendix_suite(const AppendixGrid& grid) {
  auto blank = [](ClaimId id, std::string description) {
    ClaimReport r;
    r.claim_id = id;
    r.grid = std::move(description);
    return r;
  };
  std::ostringstream ctx_desc;
  ctx_desc << grid.p_values.size() << " p x " << grid.beta_values.size() << " beta x " << grid.t_values.size()
           << " t contexts, " << grid.y_resolution << " y points each";
  ClaimReport claim1 = blank(ClaimId::Claim1, ctx_desc.str());
  ClaimReport claim2 = blank(ClaimId::Claim2, ctx_desc.str());
  ClaimReport uv1 = blank(ClaimId::Claim3uv1, ctx_desc.str());
  ClaimReport uv2 = blank(ClaimId::Claim3uv2, ctx_desc.str());
  ClaimReport key = blank(ClaimId::KeyIneq, ctx_desc.str());
  ClaimReport hprime = blank(ClaimId::HPrimeIntegrand, ctx_desc.str() + "; Weibull(p), plus GenRayleigh(1, 2) at p=2");

  double max_residual = 0.0;
  for (double p : grid.p_values) {
    std::vector<DistributionSpec> families{DistributionSpec::weibull(p)};
    if (p == 2.0) {
      families.push_back(DistributionSpec::gen_rayleigh(1.0));
      families.push_back(DistributionSpec::gen_rayleigh(2.0));
    }
    for (double beta : grid.beta_values) {
      for (double t : grid.t_values) {
        const auto ctx = MappingContext::make(p, beta, t);
        auto c1 = verify_claim1(ctx, grid.y_resolution);
        for (double y : interior_y_grid(ctx, grid.y_resolution)) {
          const double ly = big_l(ctx, y);
          max_residual = std::max(max_residual, std::abs(big_l(ctx, tilde_map(ctx, y)) - ly) / std::max(1.0, ly));
        }
        c1.notes.clear();
        claim1.merge(c1);
        claim2.merge(verify_claim2(ctx, grid.y_resolution));
        const auto c3 = verify_claim3(ctx, grid.y_resolution);
        uv1.merge(c3.uv1);
        uv2.merge(c3.uv2);
        key.merge(c3.key_ineq);
        for (const auto& d : families) {
          auto h = hprime_integrand_check(ctx, d, grid.y_resolution);
          h.worst_point.insert(h.worst_point.begin(), d.param(0));
          hprime.merge(h);
        }
      }
    }
  }
  {
    std::ostringstream os;
    os << "max relative bisection residual " << max_residual;
    claim1.notes = os.str();
  }

  ClaimReport kernel = blank(ClaimId::Thm1Kernel, "Uniform(1), Gamma(2,1), Gamma(0.5,1), LogNormal(0,1), Weibull(0.5), "
                                                  "Weibull(2), GenRayleigh(0.5), GenRayleigh(2)");
  for (const auto& d : {DistributionSpec::uniform(1.0), DistributionSpec::gamma(2.0, 1.0),
                        DistributionSpec::gamma(0.5, 1.0), DistributionSpec::lognormal(0.0, 1.0),
                        DistributionSpec::weibull(0.5), DistributionSpec::weibull(2.0),
                        DistributionSpec::gen_rayleigh(0.5), DistributionSpec::gen_rayleigh(2.0)}) {
    auto k = verify_thm1_kernel(d, grid.kernel_betas, grid.t_values, grid.y_resolution);
    k.notes.clear();
    kernel.merge(k);
  }

  const std::vector<double> alphas{0.25, 0.5, 1.0, 1.5, 2.5, 4.0};
  std::vector<double> uv{0.25, 0.5, 0.75};
  for (int i = 1; i <= 10; ++i) uv.push_back(i);
  ClaimReport qmono = verify_qalpha_monotonicity(alphas, uv);

  std::vector<double> betas1(20);
  for (std::size_t k = 0; k < betas1.size(); ++k) betas1[k] = static_cast<double>(k + 1) / 20.0;
  std::vector<double> betas2(20);
  for (std::size_t k = 0; k < betas2.size(); ++k) betas2[k] = 0.5 + 0.49 * static_cast<double>(k) / 19.0;
  ClaimReport h1 = blank(ClaimId::HBetaMonotone1, "Gamma(1,1), LogNormal(0,1); beta = k/20");
  ClaimReport h2 = blank(ClaimId::HBetaMonotone2, "Weibull(2) p=2, Weibull(3) p=3; 20 betas in [0.5, 0.99]");
  for (double t : grid.t_values) {
    for (const auto& d : {DistributionSpec::gamma(1.0, 1.0), DistributionSpec::lognormal(0.0, 1.0)})
      h1.merge(verify_h_beta_thm1(d, t, betas1));
    h2.merge(verify_h_beta_thm2(DistributionSpec::weibull(2.0), 2.0, t, betas2));
    h2.merge(verify_h_beta_thm2(DistributionSpec::weibull(3.0), 3.0, t, betas2));
  }

  std::vector<ClaimReport> out{claim1, claim2, uv1, uv2, key, hprime, kernel, qmono, h1, h2};
  for (auto& r : out) r.finalize();
  return out;
}

}  // namespace wsum
