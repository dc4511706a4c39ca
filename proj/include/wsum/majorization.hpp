#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "wsum/random.hpp"

namespace wsum {

// Non-negative weights (a_1, ..., a_n).
class WeightVector {
 public:
  WeightVector() = default;
  explicit WeightVector(Eigen::VectorXd values);
  WeightVector(std::initializer_list<double> values);

  // Comma-separated decimals, e.g. "1,1" or "2,0.5"; throws ParseError.
  static WeightVector parse(std::string_view text);

  const Eigen::VectorXd& values() const noexcept { return values_; }
  Eigen::Index size() const noexcept { return values_.size(); }
  double operator[](Eigen::Index i) const { return values_[i]; }
  bool strictly_positive() const { return (values_.array() > 0.0).all(); }
  bool all_zero() const { return (values_.array() == 0.0).all(); }

 private:
  Eigen::VectorXd values_;
};

// Premise flavour: which transform of the weights must be majorized.
//   Thm1Log        log a < log b
//   Thm2Power(q)   a^q < b^q with q = p / (p - 1) > 1, p > 1
//   KrPower(q)     a^q < b^q with q = p / (p - 1) < 0, 0 < p < 1
//   Thm4Identity   a < b
class PremiseMode {
 public:
  enum class Kind { Thm1Log, Thm2Power, KrPower, Thm4Identity };

  static PremiseMode thm1() { return {Kind::Thm1Log, 0.0}; }
  static PremiseMode thm2(double p);
  static PremiseMode kr(double p);
  static PremiseMode thm4() { return {Kind::Thm4Identity, 0.0}; }

  // "thm1", "thm2:p=<p>", "kr:p=<p>", "thm4"; throws ParseError.
  static PremiseMode parse(std::string_view text);
  std::string to_string() const;

  Kind kind() const noexcept { return kind_; }
  double p() const noexcept { return p_; }
  double q() const noexcept { return kind_ == Kind::Thm2Power || kind_ == Kind::KrPower ? p_ / (p_ - 1.0) : 0.0; }

  // Human-readable name of the theorem hypothesis, used in error messages.
  std::string theorem_name() const;

 private:
  PremiseMode(Kind kind, double p) : kind_(kind), p_(p) {}
  Kind kind_;
  double p_;
};

inline constexpr double kSumTolerance = 1e-9;

// Returns whether a is majorized by b (a < b): equal totals and, with both
// sorted increasingly, every upper tail sum of a bounded by that of b.
// Comparisons carry slack kSumTolerance * max(1, sum |b_i|).
template <class DerivedB, class DerivedA>
bool majorizes(const Eigen::DenseBase<DerivedB>& b, const Eigen::DenseBase<DerivedA>& a) {
  if (a.size() != b.size()) throw std::invalid_argument("majorizes: length mismatch");
  if (a.size() < 2) throw std::invalid_argument("majorizes: need at least two components");
  const Eigen::Index n = a.size();
  std::vector<double> sa(static_cast<std::size_t>(n));
  std::vector<double> sb(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    sa[static_cast<std::size_t>(i)] = a.derived().coeff(i);
    sb[static_cast<std::size_t>(i)] = b.derived().coeff(i);
  }
  std::stable_sort(sa.begin(), sa.end());
  std::stable_sort(sb.begin(), sb.end());
  double scale = 0.0;
  for (double v : sb) scale += std::abs(v);
  const double tol = kSumTolerance * std::max(1.0, scale);

  double tail_a = 0.0;
  double tail_b = 0.0;
  for (std::size_t k = static_cast<std::size_t>(n); k-- > 1;) {
    tail_a += sa[k];
    tail_b += sb[k];
    if (tail_a > tail_b + tol) return false;
  }
  tail_a += sa[0];
  tail_b += sb[0];
  return std::abs(tail_a - tail_b) <= tol;
}

// Elementwise log, q-power or identity according to the mode.
Eigen::VectorXd transform(const WeightVector& w, const PremiseMode& mode);
WeightVector inverse_transform(const Eigen::VectorXd& transformed, const PremiseMode& mode);

// transform(a) < transform(b)
bool premise_holds(const WeightVector& a, const WeightVector& b, const PremiseMode& mode);

// T-transform on coordinates i, j: the gap |x_i - x_j| shrinks by the factor
// (1 - lambda), lambda in (0, 1), and x_i + x_j is unchanged.
template <class Derived>
void t_transform(Eigen::DenseBase<Derived>& x, Eigen::Index i, Eigen::Index j, double lambda) {
  const double shift = 0.5 * lambda * (x.coeff(i) - x.coeff(j));
  x.coeffRef(i) -= shift;
  x.coeffRef(j) += shift;
}

struct MajorizationPair {
  WeightVector a;
  WeightVector b;
};

// Draws transform(b) with i.i.d. components from a bounded mode-specific
// range, applies `steps` random T-transforms and a random permutation to get
// transform(a) < transform(b), and maps both back. premise_holds(a, b, mode)
// is true for every output; steps = 0 yields a permutation of b.
MajorizationPair random_majorization_pair(std::size_t n, const PremiseMode& mode, SeededStream& stream,
                                          std::size_t steps);

}  // namespace wsum
