#include <cmath>

#include <boost/math/distributions/gamma.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <doctest.h>

#include "wsum/bounds.hpp"
#include "wsum/errors.hpp"

using namespace wsum;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd x(static_cast<Eigen::Index>(v.size()));
  std::copy(v.begin(), v.end(), x.data());
  return x;
}

}  // namespace

TEST_CASE("geometric mean weight") {
  CHECK(geometric_mean_weight(vec({2, 0.5})) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(geometric_mean_weight(vec({1, 1, 1})) == 1.0);
  CHECK(geometric_mean_weight(vec({1, 2, 4})) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK_THROWS_AS(geometric_mean_weight(vec({1, 0})), std::invalid_argument);
}

TEST_CASE("power mean weight") {
  CHECK(power_mean_weight(vec({2, 0.5}), 2.0) == doctest::Approx(1.457738).epsilon(1e-6));
  CHECK(power_mean_weight(vec({2, 0.5}), 2.0) == doctest::Approx(std::sqrt(4.25 / 2.0)).epsilon(1e-15));
  CHECK(power_mean_weight(vec({1.7, 1.7, 1.7}), 3.3) == doctest::Approx(1.7).epsilon(1e-15));
  CHECK(power_mean_weight(vec({1, 0}), 2.0) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
  // (mean(1, 2^1.5, 4^1.5))^(2/3)
  CHECK(power_mean_weight(vec({1, 2, 4}), 1.5) == doctest::Approx(2.495766).epsilon(1e-6));
  CHECK(power_mean_weight(vec({1e200, 1e200}), 4.0) == doctest::Approx(1e200));
}

TEST_CASE("power mean monotone in q and above the geometric mean") {
  SeededStream s(31, 0);
  for (int trial = 0; trial < 500; ++trial) {
    const Eigen::Index n = 2 + Eigen::Index(s.below(6));
    Eigen::VectorXd b(n);
    for (auto& x : b) x = std::exp(4.0 * s.uniform() - 2.0);
    const double geo = geometric_mean_weight(b);
    double prev = geo;
    for (double q : {1.01, 1.5, 2.0, 3.0, 6.0, 20.0}) {
      const double m = power_mean_weight(b, q);
      CHECK(m >= prev * (1.0 - 1e-14));
      CHECK(m > geo);
      prev = m;
    }
  }
  const Eigen::VectorXd c = Eigen::VectorXd::Constant(4, 0.8);
  CHECK(power_mean_weight(c, 2.0) == doctest::Approx(geometric_mean_weight(c)).epsilon(1e-15));
}

TEST_CASE("sum of iid cdf") {
  CHECK(sum_of_iid_cdf(DistributionSpec::gamma(1.0, 1.0), 2, 2.0).value ==
        doctest::Approx(1.0 - 3.0 * std::exp(-2.0)).epsilon(1e-14));
  const auto w = DistributionSpec::weibull(2.0);
  CHECK(sum_of_iid_cdf(w, 1, 0.8).value == doctest::Approx(cdf(w, 0.8)).epsilon(1e-14));
  const double median = boost::math::quantile(boost::math::gamma_distribution<>(2.0, 1.0), 0.5);
  CHECK(sum_of_iid_cdf(DistributionSpec::gamma(0.5, 1.0), 4, median).value == doctest::Approx(0.5).epsilon(1e-12));

  // Y1 + Y2 for Weibull(2) by an independent quadrature
  const double t = 1.7;
  auto inner = [&](double x) { return density(w, x) * cdf(w, t - x); };
  const double oracle = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(inner, 0.0, t, 15, 1e-13);
  CHECK(std::abs(sum_of_iid_cdf(w, 2, t).value - oracle) <= 1e-8);

  const auto mc = sum_of_iid_cdf(w, 5, 4.0, 200'000, 9);
  CHECK(mc.std_error > 0.0);
  CHECK(mc.value > 0.0);
  CHECK(mc.value < 1.0);
}

TEST_CASE("gamma upper bound uses the exact gamma(n alpha) law") {
  const auto d = DistributionSpec::gamma(2.0, 1.0);
  const WeightVector b{1, 2, 4};
  const Eigen::VectorXd grid = linear_grid(0.5, 30.0, 50);
  const auto upper = geometric_upper_bound_curve(d, b, grid);
  CHECK(upper.method == CdfMethod::ClosedForm);
  for (Eigen::Index k = 0; k < grid.size(); ++k)
    CHECK(upper.value[k] == doctest::Approx(boost::math::gamma_p(6.0, grid[k] / 2.0)).epsilon(1e-12));

  // the bound is the constant-vector comparison with premise log(2,2,2) < log b
  const WeightVector flat{2, 2, 2};
  CHECK(premise_holds(flat, b, PremiseMode::thm1()));
  const auto flat_mc = mc_cdf(d, flat, grid, 1'000'000, 4);
  for (Eigen::Index k = 0; k < grid.size(); ++k) CHECK(std::abs(flat_mc.value[k] - upper.value[k]) <= 4.0 * flat_mc.se[k] + 1e-12);
  const auto target = mc_cdf(d, b, grid, 1'000'000, 4);
  CHECK(dominance_test(target, upper, kDefaultZ).holds == false);  // upper is above target, not below
  CHECK(dominance_test(upper, target, kDefaultZ).holds);
}

TEST_CASE("power-mean lower bound premise") {
  SeededStream s(41, 0);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index n = 2 + Eigen::Index(s.below(5));
    Eigen::VectorXd b(n);
    for (auto& x : b) x = 0.1 + 3.0 * s.uniform();
    for (double q : {1.5, 2.0, 3.0}) {
      const WeightVector flat(Eigen::VectorXd::Constant(n, power_mean_weight(b, q)));
      CHECK(premise_holds(flat, WeightVector(b), PremiseMode::thm2(q / (q - 1.0))));
    }
  }
}

TEST_CASE("sandwich examples") {
  {
    const auto r = sandwich(DistributionSpec::gen_rayleigh(2.0), WeightVector{1, 1}, 2.0, {}, 1'000'000, 1);
    CHECK(r.b_star_geo == 1.0);
    CHECK(r.b_star_pow == 1.0);
    CHECK(r.upper_curve.value == r.lower_curve.value);
    CHECK(r.holds);
    for (Eigen::Index k = 0; k < r.target_curve.t.size(); ++k)
      CHECK(std::abs(r.target_curve.value[k] - r.upper_curve.value[k]) <= 4.0 * r.target_curve.se[k] + 1e-9);
  }
  {
    const auto r = sandwich(DistributionSpec::gen_rayleigh(1.0), WeightVector{2, 0.5}, 2.0, {}, 1'000'000, 2);
    CHECK(r.b_star_geo == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(r.b_star_pow == doctest::Approx(1.457738).epsilon(1e-6));
    CHECK(r.target_curve.t.size() == 50);
    CHECK(r.holds);
  }
  {
    const auto r = sandwich(DistributionSpec::weibull(3.0), WeightVector{1, 2, 4}, 1.5, {}, 1'000'000, 3);
    CHECK(r.b_star_geo == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(r.b_star_pow == doctest::Approx(2.495766).epsilon(1e-6));
    CHECK(r.q == 1.5);
    CHECK(r.holds);
    CHECK_FALSE(r.violating_t.has_value());
  }
}

TEST_CASE("sandwich preconditions") {
  CHECK_THROWS_AS(sandwich(DistributionSpec::gamma(2.0, 1.0), WeightVector{1, 2}, 2.0, {}, 1000, 1),
                  PreconditionError);
  CHECK_THROWS_AS(sandwich(DistributionSpec::gen_rayleigh(0.5), WeightVector{1, 2}, 2.0, {}, 1000, 1),
                  PreconditionError);
  CHECK_THROWS_AS(sandwich(DistributionSpec::weibull(2.0), WeightVector{1, 0}, 2.0, {}, 1000, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(sandwich(DistributionSpec::weibull(2.0), WeightVector{1, 2}, 1.0, {}, 1000, 1),
                  std::invalid_argument);
}
