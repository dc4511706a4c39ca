#pragma once

namespace wsum::special {

double log_gamma(double a);

// Regularized lower incomplete gamma P(a, x) = gamma(a, x) / Gamma(a).
double gamma_p(double a, double x);

// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x), computed directly.
double gamma_q(double a, double x);

// Standard normal distribution function.
double normal_cdf(double z);

}  // namespace wsum::special
