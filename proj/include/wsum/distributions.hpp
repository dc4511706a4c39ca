#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "wsum/random.hpp"

namespace wsum {

enum class Family { Uniform, Gamma, LogNormal, Weibull, GenRayleigh, Normal0, Laplace0 };

// One of the families for the i.i.d. summands Y_i, with validated parameters.
//
//   uniform:s=<s>                 density 1/s on (0, s)
//   gamma:alpha=<a>,beta=<b>      shape a, scale b
//   lognormal:mu=<m>,sigma=<s>
//   weibull:p=<p>                 p y^{p-1} exp(-y^p)
//   genrayleigh:nu=<v>            proportional to y^{v-1} exp(-y^2/2)
//   normal0:sigma=<s>             centred normal
//   laplace0:scale=<b>            centred Laplace
class DistributionSpec {
 public:
  static DistributionSpec uniform(double s);
  static DistributionSpec gamma(double alpha, double beta);
  static DistributionSpec lognormal(double mu, double sigma);
  static DistributionSpec weibull(double p);
  static DistributionSpec gen_rayleigh(double nu);
  static DistributionSpec normal0(double sigma);
  static DistributionSpec laplace0(double scale);

  // Parses the `family:key=value,...` grammar; throws ParseError.
  static DistributionSpec parse(std::string_view text);
  std::string to_string() const;

  Family family() const noexcept { return family_; }
  double param(std::size_t i) const { return params_.at(i); }

  // Support (0, inf) (or (0, s) for uniform); false for the symmetric families.
  bool positive_support() const noexcept;
  bool symmetric() const noexcept;

  double log_density(double y) const;
  double cdf(double y) const;
  double survival(double y) const;
  double quantile(double u) const;
  double draw(SeededStream& stream) const;

  bool operator==(const DistributionSpec&) const = default;

 private:
  DistributionSpec(Family family, double p0, double p1);

  Family family_;
  std::array<double, 2> params_;
  double log_norm_ = 0.0;
};

double density(const DistributionSpec& d, double y);
double cdf(const DistributionSpec& d, double y);
double quantile(const DistributionSpec& d, double u);

// n i.i.d. draws from the stream; deterministic in (seed, stream index).
Eigen::VectorXd sample(const DistributionSpec& d, SeededStream& stream, std::size_t n);

// ---------------------------------------------------------------------------
// Log-concavity conditions

enum class ConditionId { Thm1, Thm2, ThmKR, Thm4 };

std::string to_string(ConditionId id);
ConditionId condition_id_from_string(std::string_view s);

struct ConditionReport {
  ConditionId condition_id = ConditionId::Thm1;
  double p = 0.0;  // exponent for Thm2 / ThmKR, 0 otherwise
  std::vector<double> grid;
  bool holds = false;
  double worst_violation = 0.0;
  std::string notes;
};

inline constexpr double kConcavityTolerance = 1e-9;
inline constexpr std::size_t kDefaultConditionGrid = 2048;

// Checks concavity of phi on an increasing grid via three-point chords:
// phi(x_k) >= w phi(x_{k-1}) + (1 - w) phi(x_{k+1}) with x_k the matching
// convex combination. Defects are scaled by max(1, |phi(x_k)|); -inf values
// (outside support) count as violations unless the whole chord is -inf.
ConditionReport check_concavity(ConditionId id, std::vector<double> grid,
                                const std::function<double(double)>& phi);

// log f(e^x) concave in x.
ConditionReport check_theorem1_condition(const DistributionSpec& d,
                                         std::size_t grid_size = kDefaultConditionGrid);
// min{0, 2/p - 1} log x + log f(x^{1/p}) concave in x > 0, p > 1.
ConditionReport check_theorem2_condition(const DistributionSpec& d, double p,
                                         std::size_t grid_size = kDefaultConditionGrid);
// The density of Y^p is log-concave, 0 < p < 1.
ConditionReport check_kr_condition(const DistributionSpec& d, double p,
                                   std::size_t grid_size = kDefaultConditionGrid);
// Symmetric about zero with log-concave density.
ConditionReport check_theorem4_condition(const DistributionSpec& d,
                                         std::size_t grid_size = kDefaultConditionGrid);

// Log-spaced grid of `count` points on [lo, hi], lo > 0.
std::vector<double> log_spaced(double lo, double hi, std::size_t count);

}  // namespace wsum
