#include <algorithm>
#include <cmath>
#include <limits>

#include <doctest.h>

#include "wsum/appendix.hpp"
#include "wsum/errors.hpp"
#include "wsum/majorization.hpp"
#include "wsum/sum_engine.hpp"

using namespace wsum;

namespace {

const MappingContext kQuad = MappingContext::make(2.0, 0.75, 1.0);

double map_equation_residual(const MappingContext& c, double y) {
  const double yt = tilde_map(c, y);
  return std::abs(std::pow(y, c.p) + std::pow(x_of_y(c, y), c.p) - std::pow(yt, c.p) -
                  std::pow(x_of_y(c, yt), c.p));
}

std::vector<MappingContext> contexts() {
  std::vector<MappingContext> out;
  for (double p : {1.5, 2.0, 3.0, 5.0})
    for (double beta : {0.5 + 1e-6, 0.55, 0.6, 0.75, 0.9, 0.99})
      for (double t : {0.5, 1.0, 2.0, 5.0}) out.push_back(MappingContext::make(p, beta, t));
  return out;
}

}  // namespace

TEST_CASE("mapping context") {
  CHECK(kQuad.q == 2.0);
  CHECK(kQuad.y0 == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(kQuad.y1 == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(kQuad.delta == 0.0);
  CHECK(MappingContext::make(3.0, 0.6, 1.0).delta == -1.0);
  CHECK_THROWS_AS(MappingContext::make(1.0, 0.75, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(MappingContext::make(2.0, 0.4, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(MappingContext::make(2.0, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(MappingContext::make(2.0, 0.75, 0.0), std::invalid_argument);
}

TEST_CASE("big_l") {
  CHECK(big_l(kQuad, 0.5) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(big_l(kQuad, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(big_l(kQuad, 2.0) == doctest::Approx(3.0).epsilon(1e-15));
  CHECK_THROWS_AS(big_l(kQuad, -0.1), std::out_of_range);
  CHECK_THROWS_AS(big_l(kQuad, 2.1), std::out_of_range);
  for (const auto& c : contexts()) {
    double best = std::numeric_limits<double>::infinity();
    double arg = 0.0;
    for (int k = 0; k <= 10'000; ++k) {
      const double y = std::min(c.y1, c.y1 * k / 10'000.0);
      const double v = big_l(c, y);
      if (v < best) {
        best = v;
        arg = y;
      }
    }
    CHECK(std::abs(arg - c.y0) <= c.y1 / 10'000.0);
    CHECK(big_l(c, c.y0) <= best * (1.0 + 1e-12));
  }
}

TEST_CASE("x_of_y") {
  CHECK(x_of_y(kQuad, 1.0) == doctest::Approx(std::sqrt(1.0 / 3.0)).epsilon(1e-15));
  CHECK(x_of_y(kQuad, 2.0 * (1.0 - 1e-12)) == doctest::Approx(0.0).epsilon(1e-9).scale(1.0));
  const auto half = MappingContext::make(2.0, 0.5, 1.0);
  CHECK(half.y1 == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(x_of_y(half, 1e-300) == doctest::Approx(half.y1).epsilon(1e-15));
  CHECK_THROWS_AS(x_of_y(kQuad, 2.5), std::out_of_range);
}

TEST_CASE("tilde_map") {
  CHECK(tilde_map(kQuad, 0.25) == doctest::Approx(0.75).epsilon(1e-12));
  for (int k = 1; k < 50; ++k) {
    const double y = 0.5 * k / 50.0;
    CHECK(std::abs(tilde_map(kQuad, y) - (1.0 - y)) <= 1e-10);
  }
  const auto c = MappingContext::make(3.0, 0.6, 1.0);
  const double y = 0.3 * c.y0;
  const double yt = tilde_map(c, y);
  CHECK(yt > c.y0);
  CHECK(yt < c.y1);
  CHECK(std::abs(big_l(c, yt) - big_l(c, y)) <= kTildeResidual * std::max(1.0, big_l(c, y)));
  CHECK(tilde_map(c, c.y0 * (1.0 - 1e-9)) == doctest::Approx(c.y0).epsilon(1e-6));
  CHECK_THROWS_AS(tilde_map(c, c.y0 * 1.01), std::out_of_range);
  CHECK_THROWS_AS(tilde_map(c, 0.0), std::out_of_range);
}

TEST_CASE("bisection residual and map equation over the default grids") {
  for (const auto& c : contexts()) {
    for (double y : interior_y_grid(c, 64)) {
      const double lv = big_l(c, y);
      const double yt = tilde_map(c, y);
      INFO("p=" << c.p << " beta=" << c.beta << " t=" << c.t << " y=" << y);
      CHECK(std::abs(big_l(c, yt) - lv) <= kTildeResidual * std::max(1.0, lv));
      CHECK(map_equation_residual(c, y) <= 1e-9 * std::max(1.0, std::pow(c.y1, c.p)));
    }
  }
}

TEST_CASE("tilde_derivative") {
  const auto d = tilde_derivative(kQuad, 0.25);
  CHECK(d.value == doctest::Approx(-1.0).epsilon(1e-8));
  CHECK_FALSE(d.finite_difference);
  const auto c = MappingContext::make(3.0, 0.6, 1.0);
  const double y = 0.3 * c.y0;
  const double h = 1e-6 * c.y0;
  const double fd = (tilde_map(c, y + h) - tilde_map(c, y - h)) / (2.0 * h);
  const auto an = tilde_derivative(c, y);
  CHECK(an.value < 0.0);
  CHECK(std::abs(an.value - fd) <= 1e-6 * std::abs(fd));
}

TEST_CASE("tilde_derivative agrees with central differences") {
  for (const auto& c : contexts()) {
    const double h = 1e-6 * c.y0;
    for (double y : interior_y_grid(c, 16)) {
      if (y - h <= 0.0 || y + h >= c.y0) continue;
      const double fd = (tilde_map(c, y + h) - tilde_map(c, y - h)) / (2.0 * h);
      const double an = tilde_derivative(c, y).value;
      INFO("p=" << c.p << " beta=" << c.beta << " t=" << c.t << " y=" << y);
      CHECK(std::abs(an - fd) <= 1e-5 * std::abs(fd));
    }
  }
}

TEST_CASE("majorization chain of the mapping") {
  for (const auto& c : contexts()) {
    for (double y : interior_y_grid(c, 32)) {
      const double yt = tilde_map(c, y);
      Eigen::Vector2d inner(std::pow(yt, c.p), std::pow(x_of_y(c, yt), c.p));
      Eigen::Vector2d outer(std::pow(y, c.p), std::pow(x_of_y(c, y), c.p));
      // the totals agree only up to the bisection residual
      inner *= outer.sum() / inner.sum();
      CHECK(majorizes(outer, inner));
    }
  }
}

TEST_CASE("q_alpha") {
  for (double u : {0.3, 1.0, 7.0})
    for (double v : {0.2, 1.0, 9.0}) CHECK(q_alpha(1.0, u, v) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(q_alpha(2.0, 3.0, 1.0) == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(q_alpha(0.5, 4.0, 1.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(q_alpha(0.5, 9.0, 1.0) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(q_alpha(2.5, 2.0, 2.0) == doctest::Approx(2.5 * std::pow(2.0, 1.5)).epsilon(1e-14));
  CHECK(q_alpha(2.5, 2.0, 2.0 * (1.0 + 1e-13)) == doctest::Approx(2.5 * std::pow(2.0, 1.5)).epsilon(1e-11));
  CHECK_THROWS_AS(q_alpha(0.5, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(q_alpha(0.5, 1.0, -1.0), std::invalid_argument);
}

TEST_CASE("q_alpha monotonicity report") {
  std::vector<double> uv;
  for (int k = 1; k <= 10; ++k) uv.push_back(k);
  CHECK(verify_qalpha_monotonicity({0.5}, uv).holds);
  const auto one = verify_qalpha_monotonicity({1.0}, uv);
  CHECK(one.holds);
  CHECK(std::abs(one.worst_margin) <= 1e-15);
  CHECK(verify_qalpha_monotonicity({2.5}, uv).holds);
}

TEST_CASE("theorem 1 kernel") {
  CHECK(verify_thm1_kernel(DistributionSpec::gamma(2.0, 1.0), {0.5}, {2.0}, 100).holds);
  CHECK(verify_thm1_kernel(DistributionSpec::lognormal(0.0, 1.0), {0.7}, {3.0}, 100).holds);
  const auto w = verify_thm1_kernel(DistributionSpec::weibull(2.0), {1.0}, {0.5, 1.0, 3.0}, 100);
  CHECK(w.holds);
  CHECK(std::abs(w.worst_margin) <= 1e-12);
}

TEST_CASE("claim 2") {
  const auto r = verify_claim2(kQuad, 1);  // single point y = y0 / 2 = 0.25
  CHECK(r.holds);
  CHECK(std::abs(r.worst_margin) <= 1e-9);
  CHECK(verify_claim2(MappingContext::make(1.5, 0.8, 1.0)).holds);
  CHECK(verify_claim2(MappingContext::make(3.0, 0.55, 2.0)).holds);
}

TEST_CASE("claim 3") {
  // y = 0.25, tilde = 0.75
  CHECK(0.75 * 0.75 >= 0.25 * 1.75);
  CHECK(0.75 * 0.25 <= 0.25 * 1.25);
  const auto r = verify_claim3(kQuad, 1);
  CHECK(r.uv1.holds);
  CHECK(r.uv2.holds);
  CHECK(r.key_ineq.holds);
  CHECK(r.uv1.worst_margin == doctest::Approx(0.5625 - 0.4375).epsilon(1e-9));
  const auto half = verify_claim3(MappingContext::make(2.0, 0.5, 1.0));
  CHECK(half.uv1.holds);
  CHECK(half.uv2.holds);
  const auto p3 = verify_claim3(MappingContext::make(3.0, 0.6, 1.0));
  CHECK(p3.uv1.holds);
  CHECK(p3.uv2.holds);
  CHECK(p3.key_ineq.holds);
}

TEST_CASE("claim 1") {
  for (const auto& c : contexts()) {
    const auto r = verify_claim1(c, 64);
    INFO("p=" << c.p << " beta=" << c.beta << " t=" << c.t << " " << r.notes);
    CHECK(r.holds);
  }
}

TEST_CASE("h-prime integrand") {
  const auto w2 = hprime_integrand_check(kQuad, DistributionSpec::weibull(2.0));
  CHECK(w2.holds);
  CHECK(hprime_integrand_check(MappingContext::make(3.0, 0.6, 1.5), DistributionSpec::weibull(3.0)).holds);
  CHECK(hprime_integrand_check(kQuad, DistributionSpec::gen_rayleigh(1.0)).holds);
  CHECK_THROWS_AS(hprime_integrand_check(kQuad, DistributionSpec::gen_rayleigh(0.5)), PreconditionError);
}

TEST_CASE("h beta for theorem 1") {
  const auto e = DistributionSpec::gamma(1.0, 1.0);
  CHECK(h_beta_thm1(e, 2.0, 1.0) == doctest::Approx(0.593994).epsilon(1e-6));
  CHECK(std::abs(h_beta_thm1(e, 2.0, 0.5) - exact_exp_mixture_cdf(WeightVector{2.0, 0.5}, 2.0)) <= 1e-9);
  std::vector<double> betas;
  for (int k = 1; k <= 20; ++k) betas.push_back(k / 20.0);
  CHECK(verify_h_beta_thm1(e, 2.0, betas).holds);
  CHECK(verify_h_beta_thm1(DistributionSpec::lognormal(0.0, 1.0), 3.0, betas).holds);
  CHECK_THROWS_AS(h_beta_thm1(DistributionSpec::normal0(1.0), 1.0, 0.5), std::invalid_argument);
}

TEST_CASE("h beta for theorem 2") {
  const auto w = DistributionSpec::weibull(2.0);
  const double equal = quad_cdf_point(w, WeightVector{std::sqrt(0.5), std::sqrt(0.5)}, 2.0);
  CHECK(h_beta_thm2(w, 2.0, 2.0, 0.5) == doctest::Approx(equal).epsilon(1e-9));
  CHECK(h_beta_thm2(w, 2.0, 2.0, 1.0 - 1e-12) == doctest::Approx(cdf(w, 2.0)).epsilon(1e-6));
  std::vector<double> betas;
  for (int k = 0; k < 20; ++k) betas.push_back(0.5 + 0.49 * k / 19.0);
  CHECK(verify_h_beta_thm2(w, 2.0, 2.0, betas).holds);
  CHECK(verify_h_beta_thm2(DistributionSpec::weibull(3.0), 3.0, 1.0, betas).holds);
  CHECK_THROWS_AS(h_beta_thm2(DistributionSpec::gen_rayleigh(0.5), 2.0, 1.0, 0.6), PreconditionError);
}

TEST_CASE("default suite") {
  const auto reports = run_appendix_suite();
  CHECK(reports.size() == 10);
  for (const auto& r : reports) {
    INFO(to_string(r.claim_id) << " " << r.notes);
    CHECK(r.holds);
    CHECK(r.worst_margin >= -kClaimTolerance);
    CHECK(claim_id_from_string(to_string(r.claim_id)) == r.claim_id);
  }
}
