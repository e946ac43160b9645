#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <limits>
#include <vector>

#include "doctest.h"
#include "nls/errors.hpp"
#include "nls/nonlinearity.hpp"

using namespace nls;

namespace {
const double kInf = std::numeric_limits<double>::infinity();

std::vector<NonlinearitySpec> sample_specs() {
  return {
      NonlinearitySpec::pure_power(3.0),
      NonlinearitySpec::pure_power(2.5),
      NonlinearitySpec::cubic_quintic(1.0, 1.0),
      NonlinearitySpec::cubic_quintic(2.0, 0.5),
      NonlinearitySpec::combined_powers({{1.0, 3.0}, {-1.0, 5.0}}),
      truncate(NonlinearitySpec::cubic_quintic(1.0, 1.0)),
  };
}
}  // namespace

TEST_CASE("g evaluates per family") {
  auto cq = NonlinearitySpec::cubic_quintic(1.0, 1.0);
  CHECK(cq.g(-2.0) == 2.0);  // negative extension is exactly -s
  CHECK(cq.g(1.0) == 0.0);   // 1 - 1
  CHECK(cq.g(0.5) == doctest::Approx(0.125 - 0.03125).epsilon(1e-15));

  auto p3 = NonlinearitySpec::pure_power(3.0);
  CHECK(p3.g(0.0) == 0.0);
  CHECK(p3.g(2.0) == 8.0);

  auto comb = NonlinearitySpec::combined_powers({{-1.0, 5.0}, {1.0, 3.0}});
  CHECK(comb.g(1.5) == doctest::Approx(cq.g(1.5)).epsilon(1e-15));
}

TEST_CASE("G evaluates per family") {
  auto p = NonlinearitySpec::pure_power(4.0);
  CHECK(p.G(2.0) == doctest::Approx(std::pow(2.0, 5.0) / 5.0).epsilon(1e-15));
  CHECK(p.G(0.0) == 0.0);

  auto cq = NonlinearitySpec::cubic_quintic(1.0, 1.0);
  CHECK(cq.G(1.0) == doctest::Approx(1.0 / 4.0 - 1.0 / 6.0).epsilon(1e-15));
}

TEST_CASE("negative extension holds for every family") {
  for (const auto& spec : sample_specs()) {
    for (double s = -10.0; s < 0.0; s += 0.37) {
      CHECK(spec.g(s) == -s);
      CHECK(spec.G(s) == -0.5 * s * s);
    }
  }
}

TEST_CASE("G' = g by central differences") {
  const double h = 1e-6;
  for (const auto& spec : sample_specs()) {
    double cut = spec.family() == NonlinearitySpec::Family::Truncated ? spec.cutoff()
                                                                      : kInf;
    for (int i = 1; i < 1000; ++i) {
      double s = 10.0 * i / 1000.0;
      if (std::abs(s - cut) < 0.05) continue;  // kink of the truncated family
      double fd = (spec.G(s + h) - spec.G(s - h)) / (2.0 * h);
      double scale = std::max(1.0, std::abs(spec.g(s)));
      CHECK(std::abs(fd - spec.g(s)) <= 1e-8 * scale);
    }
  }
}

TEST_CASE("mu_star closed forms") {
  CHECK(mu_star(NonlinearitySpec::cubic_quintic(1.0, 1.0)) == 0.1875);
  CHECK(mu_star(NonlinearitySpec::pure_power(3.0)) == kInf);
}

TEST_CASE("mu_star numeric agrees with the cubic-quintic closed form") {
  for (double a : {0.5, 1.0, 2.0, 4.0}) {
    for (double b : {0.25, 1.0, 3.0}) {
      auto spec = NonlinearitySpec::cubic_quintic(a, b);
      double closed = 3.0 * a * a / (16.0 * b);
      CHECK(mu_star(spec) == doctest::Approx(closed).epsilon(1e-15));
      CHECK(mu_star_numeric(spec) == doctest::Approx(closed).epsilon(1e-10));
    }
  }
}

TEST_CASE("mu_star numeric on a combined family with a closed-form maximum") {
  // g = s^3 - s^4/2: 2G/s^2 = s^2/2 - s^3/5 peaks at s = 5/3 with value 25/54
  auto spec = NonlinearitySpec::combined_powers({{1.0, 3.0}, {-0.5, 4.0}});
  CHECK(mu_star(spec) == doctest::Approx(25.0 / 54.0).epsilon(1e-10));
  CHECK(mu_star_numeric(spec) == doctest::Approx(25.0 / 54.0).epsilon(1e-10));
}

TEST_CASE("mu_star numeric detects unbounded families") {
  CHECK(mu_star_numeric(NonlinearitySpec::pure_power(3.0)) == kInf);
  CHECK(mu_star_numeric(NonlinearitySpec::pure_power(2.2)) == kInf);
  auto comb = NonlinearitySpec::combined_powers({{1.0, 2.5}, {1.0, 4.0}});
  CHECK(mu_star_numeric(comb) == kInf);
}

TEST_CASE("mu_star bound G(s) <= mu_star s^2 / 2 on a dense grid") {
  for (const auto& spec : sample_specs()) {
    double star = mu_star(spec);
    if (!std::isfinite(star)) continue;
    for (int i = 0; i <= 4000; ++i) {
      double s = 40.0 * i / 4000.0;
      CHECK(spec.G(s) <= 0.5 * star * s * s + 1e-14 * (1.0 + s * s));
    }
  }
}

TEST_CASE("truncate finds the smallest zero") {
  auto t = truncate(NonlinearitySpec::cubic_quintic(1.0, 1.0));
  CHECK(t.family() == NonlinearitySpec::Family::Truncated);
  CHECK(t.cutoff() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(t.g(2.0) == 0.0);
  CHECK(t.G(2.0) == doctest::Approx(1.0 / 12.0).epsilon(1e-12));
  CHECK(std::abs(t.inner().g(t.cutoff())) < 1e-12);

  auto comb = truncate(NonlinearitySpec::combined_powers({{1.0, 3.0}, {-1.0, 5.0}}));
  CHECK(comb.cutoff() == doctest::Approx(1.0).epsilon(1e-12));

  CHECK_THROWS_AS(truncate(NonlinearitySpec::pure_power(3.0)), NoZeroFoundError);
}

TEST_CASE("truncated families always have finite mu_star") {
  for (auto base : {NonlinearitySpec::cubic_quintic(1.0, 1.0),
                    NonlinearitySpec::cubic_quintic(2.0, 0.5),
                    NonlinearitySpec::combined_powers({{1.0, 3.0}, {-0.5, 4.5}})}) {
    auto t = truncate(base);
    double star = mu_star(t);
    CHECK(std::isfinite(star));
    CHECK(star > 0.0);

    // cross-check against a dense grid evaluation of 2G(s)/s^2
    double grid_max = 0.0;
    for (int i = 1; i <= 20000; ++i) {
      double s = 20.0 * i / 20000.0;
      grid_max = std::max(grid_max, 2.0 * t.G(s) / (s * s));
    }
    CHECK(star >= grid_max - 1e-9);
    CHECK(star <= grid_max * (1.0 + 1e-4) + 1e-12);
  }
}

TEST_CASE("classify reports exponents and regimes") {
  auto cq = classify(NonlinearitySpec::cubic_quintic(1.0, 1.0), 3);
  CHECK(cq.p0 == 3.0);
  CHECK(cq.p0_mass_supercritical);   // 3 > 7/3
  CHECK(cq.p0_sobolev_subcritical);  // 3 < 5
  CHECK(cq.mu_star_finite);
  CHECK(cq.regime == RegimeReport::Regime::SubcriticalAtInfinity);
  CHECK(cq.tail == RegimeReport::Tail::NonSuperlinear);

  auto p3 = classify(NonlinearitySpec::pure_power(3.0), 3);
  CHECK(p3.p0 == 3.0);
  CHECK(p3.p_infinity == 3.0);
  CHECK(!p3.mu_star_finite);
  CHECK(p3.regime == RegimeReport::Regime::SupercriticalAtInfinity);

  auto p2 = classify(NonlinearitySpec::pure_power(2.0), 3);
  CHECK(!p2.p0_mass_supercritical);  // 2 < 7/3

  auto trunc = classify(truncate(NonlinearitySpec::cubic_quintic(1.0, 1.0)), 3);
  CHECK(trunc.p0 == 3.0);
  CHECK(trunc.mu_star_finite);
  CHECK(trunc.regime == RegimeReport::Regime::SubcriticalAtInfinity);
}

TEST_CASE("critical exponents") {
  CHECK(sobolev_critical_exponent(3) == 6.0);
  CHECK(sobolev_critical_exponent(2) == kInf);
  CHECK(mass_critical_exponent(3) == doctest::Approx(7.0 / 3.0).epsilon(1e-15));
  CHECK(mass_critical_exponent(2) == 3.0);
}

TEST_CASE("constructor validation") {
  CHECK_THROWS_AS(NonlinearitySpec::pure_power(1.0), std::invalid_argument);
  CHECK_THROWS_AS(NonlinearitySpec::pure_power(0.5), std::invalid_argument);
  CHECK_THROWS_AS(NonlinearitySpec::cubic_quintic(0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(NonlinearitySpec::cubic_quintic(1.0, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(NonlinearitySpec::combined_powers({}), std::invalid_argument);
  CHECK_THROWS_AS(NonlinearitySpec::combined_powers({{1.0, 0.9}}), std::invalid_argument);
}
