#include "wsum/special_functions.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace wsum::special {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxIter = 10000;

// log of the prefactor x^a e^{-x} / Gamma(a)
double log_prefactor(double a, double x) { return a * std::log(x) - x - log_gamma(a); }

// Series for P(a, x), good for x < a + 1.
double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int n = 0; n < kMaxIter; ++n) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * kEps) break;
  }
  return sum * std::exp(log_prefactor(a, x));
}

// Modified Lentz continued fraction for Q(a, x), good for x >= a + 1.
double gamma_q_fraction(double a, double x) {
  constexpr double tiny = std::numeric_limits<double>::min() / kEps;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIter; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return std::exp(log_prefactor(a, x)) * h;
}

}  // namespace

double log_gamma(double a) {
  if (!(a > 0.0)) throw std::domain_error("log_gamma: argument must be positive");
  // lgamma_r avoids the global signgam write of std::lgamma
  int sign = 0;
  return ::lgamma_r(a, &sign);
}

double gamma_p(double a, double x) {
  if (!(a > 0.0)) throw std::domain_error("gamma_p: shape must be positive");
  if (std::isnan(x)) return x;
  if (x <= 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  if (x < a + 1.0) return gamma_p_series(a, x);
  return 1.0 - gamma_q_fraction(a, x);
}

double gamma_q(double a, double x) {
  if (!(a > 0.0)) throw std::domain_error("gamma_q: shape must be positive");
  if (std::isnan(x)) return x;
  if (x <= 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_fraction(a, x);
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

}  // namespace wsum::special
