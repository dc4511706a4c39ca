#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include <boost/math/distributions/gamma.hpp>
#include <boost/math/distributions/laplace.hpp>
#include <boost/math/distributions/lognormal.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/weibull.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <doctest.h>

#include "wsum/distributions.hpp"
#include "wsum/errors.hpp"

using namespace wsum;

namespace {

std::vector<DistributionSpec> representative() {
  return {DistributionSpec::uniform(2.0),       DistributionSpec::gamma(2.0, 1.0),
          DistributionSpec::gamma(0.5, 1.5),    DistributionSpec::lognormal(0.3, 0.8),
          DistributionSpec::weibull(0.5),       DistributionSpec::weibull(2.0),
          DistributionSpec::gen_rayleigh(0.5),  DistributionSpec::gen_rayleigh(2.0),
          DistributionSpec::gen_rayleigh(3.0),  DistributionSpec::normal0(1.3),
          DistributionSpec::laplace0(0.7)};
}

// Independent distribution function: boost where available, else
// P(nu/2, y^2/2) for the generalized Rayleigh family.
double reference_cdf(const DistributionSpec& d, double y) {
  switch (d.family()) {
    case Family::Uniform: return std::clamp(y / d.param(0), 0.0, 1.0);
    case Family::Gamma: return y <= 0 ? 0.0 : boost::math::cdf(boost::math::gamma_distribution<>(d.param(0), d.param(1)), y);
    case Family::LogNormal:
      return y <= 0 ? 0.0 : boost::math::cdf(boost::math::lognormal_distribution<>(d.param(0), d.param(1)), y);
    case Family::Weibull: return y <= 0 ? 0.0 : boost::math::cdf(boost::math::weibull_distribution<>(d.param(0), 1.0), y);
    case Family::GenRayleigh: return y <= 0 ? 0.0 : boost::math::gamma_p(d.param(0) / 2.0, y * y / 2.0);
    case Family::Normal0: return boost::math::cdf(boost::math::normal_distribution<>(0.0, d.param(0)), y);
    case Family::Laplace0: return boost::math::cdf(boost::math::laplace_distribution<>(0.0, d.param(0)), y);
  }
  return 0.0;
}

}  // namespace

TEST_CASE("density examples") {
  CHECK(density(DistributionSpec::weibull(2.0), 1.0) == doctest::Approx(2.0 * std::exp(-1.0)).epsilon(1e-14));
  CHECK(density(DistributionSpec::weibull(2.0), 1.0) == doctest::Approx(0.735759).epsilon(1e-6));
  CHECK(density(DistributionSpec::uniform(2.0), 3.0) == 0.0);
  CHECK(density(DistributionSpec::gen_rayleigh(2.0), 1.0) == doctest::Approx(0.606531).epsilon(1e-6));
  CHECK(density(DistributionSpec::gamma(2.0, 1.0), -1.0) == 0.0);
}

TEST_CASE("cdf examples") {
  CHECK(cdf(DistributionSpec::weibull(2.0), std::sqrt(std::log(2.0))) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(cdf(DistributionSpec::gamma(2.0, 1.0), 2.0) == doctest::Approx(0.593994).epsilon(1e-6));
  for (const auto& d : representative()) {
    CHECK(cdf(d, std::numeric_limits<double>::infinity()) == 1.0);
    CHECK(cdf(d, 1e300) == 1.0);
    CHECK(cdf(d, -1e300) == doctest::Approx(0.0));
  }
}

TEST_CASE("cdf matches independent implementations and is nondecreasing") {
  for (const auto& d : representative()) {
    const double lo = d.positive_support() ? 0.0 : -6.0;
    double prev = -1.0;
    for (int k = 0; k <= 400; ++k) {
      const double y = lo + (6.0 - lo) * k / 400.0;
      const double v = cdf(d, y);
      INFO(d.to_string() << " y=" << y);
      CHECK(v >= prev);
      CHECK(std::abs(v - reference_cdf(d, y)) <= 1e-12);
      CHECK(std::abs(d.survival(y) - (1.0 - reference_cdf(d, y))) <= 1e-12);
      prev = v;
    }
  }
}

TEST_CASE("densities integrate to one") {
  boost::math::quadrature::tanh_sinh<double> ts;
  for (const auto& d : representative()) {
    auto f = [&](double y) { return density(d, y); };
    double total = 0.0;
    if (d.family() == Family::Uniform) {
      total = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, 0.0, d.param(0));
    } else if (d.positive_support()) {
      total = ts.integrate(f, 0.0, std::numeric_limits<double>::infinity());
    } else {
      total = 2.0 * ts.integrate(f, 0.0, std::numeric_limits<double>::infinity());
    }
    INFO(d.to_string());
    CHECK(std::abs(total - 1.0) <= 1e-6);
  }
}

TEST_CASE("quantile inverts cdf") {
  for (const auto& d : representative()) {
    for (double u : {1e-9, 1e-6, 0.001, 0.1, 0.25, 0.5, 0.75, 0.9, 0.999, 1.0 - 1e-6}) {
      INFO(d.to_string() << " u=" << u);
      CHECK(std::abs(cdf(d, quantile(d, u)) - u) <= 1e-10);
    }
  }
  CHECK(quantile(DistributionSpec::gamma(1.0, 1.0), 0.0) == 0.0);
  CHECK_THROWS_AS(quantile(DistributionSpec::gamma(1.0, 1.0), -0.1), std::invalid_argument);
  CHECK_THROWS_AS(quantile(DistributionSpec::gamma(1.0, 1.0), 1.5), std::invalid_argument);
}

TEST_CASE("sampling is deterministic per (seed, stream)") {
  const auto d = DistributionSpec::uniform(1.0);
  SeededStream s1(7, 0);
  SeededStream s2(7, 0);
  SeededStream s3(7, 1);
  const Eigen::VectorXd x = sample(d, s1, 3);
  const Eigen::VectorXd y = sample(d, s2, 3);
  const Eigen::VectorXd z = sample(d, s3, 3);
  CHECK(x == y);
  CHECK(x != z);
  CHECK(((x.array() > 0.0) && (x.array() < 1.0)).all());
}

TEST_CASE("sample means") {
  {
    SeededStream s(11, 0);
    const Eigen::VectorXd x = sample(DistributionSpec::weibull(1.0), s, 1'000'000);
    CHECK(std::abs(x.mean() - 1.0) <= 0.004);
  }
  {
    SeededStream s(12, 0);
    const Eigen::VectorXd x = sample(DistributionSpec::gen_rayleigh(2.0), s, 1'000'000);
    CHECK(std::abs(x.mean() - std::sqrt(std::numbers::pi / 2.0)) <= 0.003);
  }
}

TEST_CASE("empirical cdf of samples within the DKW band") {
  const std::size_t n = 1'000'000;
  const double band = 4.0 * std::sqrt(std::log(2.0) / (2.0 * n));
  std::uint64_t seed = 100;
  for (const auto& d : representative()) {
    SeededStream s(seed++, 0);
    Eigen::VectorXd x = sample(d, s, n);
    std::sort(x.data(), x.data() + x.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < n; i += 97) {
      const double f = cdf(d, x[Eigen::Index(i)]);
      worst = std::max({worst, std::abs(f - double(i + 1) / n), std::abs(f - double(i) / n)});
    }
    INFO(d.to_string() << " sup deviation " << worst);
    CHECK(worst <= band);
  }
}

TEST_CASE("parse and to_string round trip") {
  for (const auto& d : representative()) CHECK(DistributionSpec::parse(d.to_string()) == d);
  const auto g = DistributionSpec::parse("gamma:alpha=2,beta=0.5");
  CHECK(g.family() == Family::Gamma);
  CHECK(g.param(0) == 2.0);
  CHECK(g.param(1) == 0.5);
  CHECK(DistributionSpec::parse("weibull:p=3") == DistributionSpec::weibull(3.0));
}

TEST_CASE("parse errors carry a position") {
  auto position_of = [](const std::string& text) -> long {
    try {
      DistributionSpec::parse(text);
    } catch (const ParseError& e) {
      return long(e.position());
    }
    return -1;
  };
  CHECK(position_of("cauchy:x=1") == 0);
  CHECK(position_of("gamma:alpha=2,beta=x") == 19);
  CHECK(position_of("gamma:alpha=2") >= 0);
  CHECK(position_of("weibull:p=-1") >= 0);
  CHECK(position_of("weibull:q=1") == 8);
  CHECK_THROWS_AS(DistributionSpec::gamma(-1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(DistributionSpec::uniform(0.0), std::invalid_argument);
}

TEST_CASE("theorem 1 condition") {
  CHECK(check_theorem1_condition(DistributionSpec::gamma(2.0, 1.0)).holds);
  CHECK(check_theorem1_condition(DistributionSpec::lognormal(0.0, 1.0)).holds);
  for (const auto& d : {DistributionSpec::uniform(1.0), DistributionSpec::uniform(3.0),
                        DistributionSpec::gamma(0.5, 1.0), DistributionSpec::gamma(2.0, 1.0),
                        DistributionSpec::gamma(7.0, 0.2), DistributionSpec::lognormal(0.0, 1.0),
                        DistributionSpec::lognormal(-1.0, 2.5), DistributionSpec::weibull(0.5),
                        DistributionSpec::weibull(2.0), DistributionSpec::weibull(5.0),
                        DistributionSpec::gen_rayleigh(0.5), DistributionSpec::gen_rayleigh(1.0),
                        DistributionSpec::gen_rayleigh(2.0)}) {
    const auto r = check_theorem1_condition(d);
    INFO(d.to_string() << " " << r.notes);
    CHECK(r.holds);
    CHECK(r.grid.size() == kDefaultConditionGrid);
    CHECK(r.condition_id == ConditionId::Thm1);
  }
}

TEST_CASE("theorem 1 condition rejects a bimodal mixture") {
  // equal mixture of uniform(0.9, 1.0) and uniform(9.9, 10.0)
  auto log_f = [](double y) {
    if ((y > 0.9 && y < 1.0) || (y > 9.9 && y < 10.0)) return std::log(5.0);
    return -std::numeric_limits<double>::infinity();
  };
  auto phi = [&](double x) { return log_f(std::exp(x)) + x; };
  const auto r = check_concavity(ConditionId::Thm1, log_spaced(0.9001, 9.9999, 2048), phi);
  CHECK_FALSE(r.holds);
  CHECK(r.worst_violation < 0.0);
}

TEST_CASE("theorem 2 condition") {
  for (double p : {1.5, 2.0, 3.0, 5.0}) {
    const auto r = check_theorem2_condition(DistributionSpec::weibull(p), p);
    INFO("p=" << p << " " << r.notes);
    CHECK(r.holds);
    CHECK(r.p == p);
  }
  for (double nu : {0.5, 0.9, 1.0, 1.5, 3.0}) {
    const auto r = check_theorem2_condition(DistributionSpec::gen_rayleigh(nu), 2.0);
    INFO("nu=" << nu << " " << r.notes);
    CHECK(r.holds == (nu >= 1.0));
  }
  CHECK_THROWS_AS(check_theorem2_condition(DistributionSpec::weibull(2.0), 0.5), std::invalid_argument);
  CHECK_FALSE(check_theorem2_condition(DistributionSpec::normal0(1.0), 2.0).holds);
}

TEST_CASE("karlin-rinott condition") {
  CHECK(check_kr_condition(DistributionSpec::weibull(0.5), 0.5).holds);
  CHECK(check_kr_condition(DistributionSpec::gamma(1.0, 1.0), 0.5).holds);
  const auto r = check_kr_condition(DistributionSpec::weibull(0.5), 0.9);
  CHECK(r.grid.size() == kDefaultConditionGrid);
  CHECK(std::isfinite(r.worst_violation));
  CHECK_THROWS_AS(check_kr_condition(DistributionSpec::weibull(0.5), 1.5), std::invalid_argument);
}

TEST_CASE("theorem 4 condition") {
  CHECK(check_theorem4_condition(DistributionSpec::normal0(1.0)).holds);
  CHECK(check_theorem4_condition(DistributionSpec::laplace0(1.0)).holds);
  CHECK_FALSE(check_theorem4_condition(DistributionSpec::gamma(2.0, 1.0)).holds);
}

TEST_CASE("condition id names round trip") {
  for (auto id : {ConditionId::Thm1, ConditionId::Thm2, ConditionId::ThmKR, ConditionId::Thm4})
    CHECK(condition_id_from_string(to_string(id)) == id);
}
