#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "wsum/distributions.hpp"
#include "wsum/majorization.hpp"

namespace wsum {

enum class CdfMethod { ExactExpMixture, MonteCarloCRN, Quadrature, ClosedForm };

std::string to_string(CdfMethod m);
CdfMethod cdf_method_from_string(const std::string& s);

// Pr(sum a_i Y_i <= t) on a grid of t values.
struct CdfCurve {
  Eigen::VectorXd t;
  Eigen::VectorXd value;
  Eigen::VectorXd se;  // zero for deterministic methods
  CdfMethod method = CdfMethod::MonteCarloCRN;
  std::uint64_t seed = 0;
  std::size_t n_samples = 0;

  bool exact() const { return method != CdfMethod::MonteCarloCRN; }
};

enum class Direction { LeftLeqStRight, RightLeqStLeft };
std::string to_string(Direction d);
Direction direction_from_string(const std::string& s);

struct DominanceReport {
  Direction direction = Direction::LeftLeqStRight;
  bool holds = false;
  double worst_margin = 0.0;
  std::optional<double> violating_t;
  std::string tolerance_rule;
};

inline constexpr double kDefaultZ = 4.0;
inline constexpr std::size_t kDefaultGridPoints = 50;
inline constexpr std::size_t kDefaultSamples = 1'000'000;
inline constexpr double kExactSlack = 1e-12;

// Sample-major N x n matrix of i.i.d. draws. Rows [b * kBlockSize, ...) come
// from SeededStream(seed, b) filled row by row, so the matrix depends only on
// (d, n, n_samples, seed).
using SampleMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
SampleMatrix draw_sample_matrix(const DistributionSpec& d, Eigen::Index n, std::size_t n_samples,
                                std::uint64_t seed);

Eigen::VectorXd weighted_sums(const SampleMatrix& samples, const WeightVector& a);

// Empirical CDF with binomial standard errors sqrt(v~ (1 - v~) / N), where
// v~ = (count + 1/2) / (N + 1) so that tail estimates of 0 or 1 keep a
// nonzero error.
CdfCurve empirical_cdf(Eigen::VectorXd sums, const Eigen::VectorXd& t_grid, std::uint64_t seed);

// Linear grid over the pooled [0.005, 0.995] sample quantiles of the given
// sums. With positive_only the grid is t_k = hi * k / count, k = 1..count.
Eigen::VectorXd auto_t_grid(const std::vector<const Eigen::VectorXd*>& sums,
                            std::size_t count = kDefaultGridPoints, bool positive_only = false);

// Explicit linear grid with inclusive endpoints.
Eigen::VectorXd linear_grid(double lo, double hi, std::size_t count);

// Pr(sum a_i E_i <= t) for i.i.d. Exp(1) E_i and distinct positive weights.
double exact_exp_mixture_cdf(const WeightVector& a, double t);
CdfCurve exact_exp_mixture_curve(const WeightVector& a, const Eigen::VectorXd& t_grid);

// Monte Carlo estimate on shared samples. An empty t_grid selects the
// automatic grid for this sum alone.
CdfCurve mc_cdf(const DistributionSpec& d, const WeightVector& a, const Eigen::VectorXd& t_grid,
                std::size_t n_samples, std::uint64_t seed);

// Nested adaptive quadrature for at most three nonzero weights; positive
// support families only.
double quad_cdf_point(const DistributionSpec& d, const WeightVector& a, double t, double abs_tol = 1e-9);
CdfCurve quad_cdf(const DistributionSpec& d, const WeightVector& a, const Eigen::VectorXd& t_grid);

// lower <=_st upper, i.e. CDF(lower) >= CDF(upper) pointwise, within
// z * sqrt(se_1^2 + se_2^2) (or kExactSlack when both curves are exact).
DominanceReport dominance_test(const CdfCurve& lower, const CdfCurve& upper, double z);

struct WeightedSumComparison {
  DominanceReport report;
  CdfCurve curve_a;  // sum a_i Y_i
  CdfCurve curve_b;  // sum b_i Y_i
};

// Checks the premise and the density condition for `mode`, then compares
// sum a_i Y_i with sum b_i Y_i on one shared sample matrix in the direction
// the theorem predicts. Weights are applied in descending order so that
// permuted weight vectors produce bit-identical curves.
WeightedSumComparison compare_weighted_sums(const DistributionSpec& d, const WeightVector& a,
                                            const WeightVector& b, const PremiseMode& mode,
                                            const Eigen::VectorXd& t_grid, std::size_t n_samples,
                                            std::uint64_t seed, double z = kDefaultZ);

// Throws PreconditionError unless d satisfies the density condition of mode.
void require_condition(const DistributionSpec& d, const PremiseMode& mode);

struct CapacityEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
};

// Monte Carlo mean of log(1 + sum a_i Y_i).
CapacityEstimate expected_log_capacity(const DistributionSpec& d, const WeightVector& a, std::size_t n_samples,
                                       std::uint64_t seed);

}  // namespace wsum
