#pragma once

#include <string>
#include <vector>

#include "wsum/distributions.hpp"

namespace wsum {

// Parameters of the change of variables used for the two-weight reduction
// with exponents p > 1, q = p / (p - 1), beta in [1/2, 1) and t > 0:
//   y0 = t (1 - beta)^{1/p},  y1 = t (1 - beta)^{-1/q},  delta = min{0, 2 - p}.
struct MappingContext {
  double p;
  double q;
  double beta;
  double t;
  double y0;
  double y1;
  double delta;

  static MappingContext make(double p, double beta, double t);
};

// L(y) = beta^{p/q} y^p + (1 - beta)^{p/q} (y1 - y)^p on [0, y1]; strictly
// convex with its minimum at y0.
double big_l(const MappingContext& ctx, double y);

// x(y) = (1/beta - 1)^{1/q} (y1 - y), y in (0, y1).
double x_of_y(const MappingContext& ctx, double y);

inline constexpr double kTildeResidual = 1e-10;

// The partner point: the unique root in (y0, y1) of L(tilde) = L(y) for y in
// (0, y0), by bisection on the increasing branch of L.
double tilde_map(const MappingContext& ctx, double y);

struct TildeDerivative {
  double value;
  bool finite_difference;  // true near y0 where the closed form is 0/0
};

// d tilde / dy from the implicit-function formula, switching to a central
// difference within 1e-6 y0 of y0.
TildeDerivative tilde_derivative(const MappingContext& ctx, double y);

// Divided difference (u^a - v^a) / (u - v) with the limit a u^{a-1} on the
// diagonal.
double q_alpha(double alpha, double u, double v);

enum class ClaimId {
  Thm1Kernel,
  HBetaMonotone1,
  HBetaMonotone2,
  Claim1,
  Claim2,
  Claim3uv1,
  Claim3uv2,
  KeyIneq,
  QAlphaMono,
  HPrimeIntegrand
};

std::string to_string(ClaimId id);
ClaimId claim_id_from_string(const std::string& s);

inline constexpr double kClaimTolerance = 1e-9;

// Margins are differences of the two sides scaled by max(1, |lhs|, |rhs|);
// holds == (worst_margin >= -kClaimTolerance).
struct ClaimReport {
  ClaimId claim_id = ClaimId::Claim1;
  std::string grid;
  bool holds = true;
  double worst_margin = 0.0;
  std::vector<double> worst_point;
  std::string notes;

  // Folds one evaluated point into the running worst case.
  void observe(double margin, std::vector<double> point);
  // Combines reports for the same claim over different grids.
  void merge(const ClaimReport& other);
  void finalize();
};

inline constexpr std::size_t kDefaultYResolution = 512;

// y0 * k / (resolution + 1), k = 1..resolution.
std::vector<double> interior_y_grid(const MappingContext& ctx, std::size_t resolution);

// Existence, location in (y0, y1) and bisection residual of the partner
// point, plus L(0) <= L(y1). Points are (p, beta, t, y).
ClaimReport verify_claim1(const MappingContext& ctx, std::size_t y_resolution = kDefaultYResolution);
ClaimReport verify_claim2(const MappingContext& ctx, std::size_t y_resolution = kDefaultYResolution);

struct Claim3Reports {
  ClaimReport uv1;
  ClaimReport uv2;
  ClaimReport key_ineq;
};
Claim3Reports verify_claim3(const MappingContext& ctx, std::size_t y_resolution = kDefaultYResolution);

// (x(~y) ~y)^delta f(x(~y)) f(~y) >= (x(y) y)^delta f(x(y)) f(y), compared in
// log space. d must satisfy the theorem 2 condition at ctx.p.
ClaimReport hprime_integrand_check(const MappingContext& ctx, const DistributionSpec& d,
                                   std::size_t y_resolution = kDefaultYResolution);

// Q_alpha decreasing in each argument for alpha <= 1, increasing for alpha > 1,
// checked between consecutive grid values. Points are (alpha, u, v).
ClaimReport verify_qalpha_monotonicity(const std::vector<double>& alpha_grid, const std::vector<double>& uv_grid);

// f(t beta - beta^2 y) f(y) >= f(beta^2 y) f(t / beta - y) for
// 0 < y < t / (2 beta). Points are (beta, t, y).
ClaimReport verify_thm1_kernel(const DistributionSpec& d, const std::vector<double>& beta_grid,
                               const std::vector<double>& t_grid, std::size_t y_resolution = kDefaultYResolution);

inline constexpr double kHBetaTolerance = 1e-7;

// Pr(Y1 / beta + beta Y2 <= t), beta in (0, 1].
double h_beta_thm1(const DistributionSpec& d, double t, double beta);
// Pr(beta^{1/q} Y1 + (1 - beta)^{1/q} Y2 <= t), beta in [1/2, 1].
double h_beta_thm2(const DistributionSpec& d, double p, double t, double beta);

// Consecutive differences h(beta_{k+1}) - h(beta_k) + kHBetaTolerance over
// an increasing beta grid. Points are (t, beta_k, beta_{k+1}).
ClaimReport verify_h_beta_thm1(const DistributionSpec& d, double t, const std::vector<double>& beta_grid);
ClaimReport verify_h_beta_thm2(const DistributionSpec& d, double p, double t, const std::vector<double>& beta_grid);

struct AppendixGrid {
  std::vector<double> p_values{1.5, 2.0, 3.0, 5.0};
  std::vector<double> beta_values{0.5 + 1e-6, 0.55, 0.6, 0.75, 0.9, 0.99};
  std::vector<double> t_values{0.5, 1.0, 2.0, 5.0};
  std::vector<double> kernel_betas{0.1, 0.25, 0.5, 0.75, 0.9, 1.0};
  std::size_t y_resolution = kDefaultYResolution;
};

// Every claim report over the grid, one report per claim id.
std::vector<ClaimReport> run_appendix_suite(const AppendixGrid& grid = {});

}  // namespace wsum
