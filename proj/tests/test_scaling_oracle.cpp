#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "nls/errors.hpp"
#include "nls/scaling_oracle.hpp"

using namespace nls;

TEST_CASE("beta exponent values") {
  CHECK(beta_exponent(3.0, 3) == doctest::Approx(-0.5).epsilon(1e-15));
  CHECK(beta_exponent(1.0 + 4.0 / 3.0, 3) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(beta_exponent(7.0 / 3.0, 3) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(beta_exponent(3.0, 2) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(beta_exponent(5.0, 2) == doctest::Approx(-0.5).epsilon(1e-15));
}

TEST_CASE("scaling law sign regimes") {
  // beta < 0 iff p > 1 + 4/N, beta > 0 iff p < 1 + 4/N, and beta > -1 on the
  // admissible exponent range
  for (int dim : {2, 3}) {
    double p_mass = mass_critical_exponent(dim);
    double p_max = sobolev_critical_exponent(dim) - 1.0;
    for (double p = 1.05; p < std::min(p_max, 12.0); p += 0.1) {
      auto law = PowerScalingLaw::make(p, dim);
      CHECK(law.beta > -1.0);
      if (p > p_mass + 1e-9) CHECK(law.beta < 0.0);
      if (p < p_mass - 1e-9) CHECK(law.beta > 0.0);
    }
  }
  CHECK_THROWS_AS(PowerScalingLaw::make(5.5, 3), std::invalid_argument);
  CHECK_THROWS_AS(PowerScalingLaw::make(1.0, 3), std::invalid_argument);
}

TEST_CASE("beta sign agrees with the growth classification") {
  // away from the mass-critical exponent, where beta crosses zero
  for (int dim : {2, 3}) {
    for (double p : {1.5, 2.0, 2.8, 3.2, 4.5}) {
      if (p >= sobolev_critical_exponent(dim) - 1.0) continue;
      RegimeReport report = classify(NonlinearitySpec::pure_power(p), dim);
      double beta = beta_exponent(p, dim);
      CHECK(report.p0_mass_supercritical == (beta < 0.0));
    }
  }
}

TEST_CASE("rescale: identity at mu = 1") {
  auto spec = NonlinearitySpec::pure_power(3.0);
  GroundState base = ground_state(spec, 3, 1.0);
  RadialProfile same = rescale_ground_state(spec, base, 3.0, 1.0);
  for (std::size_t i = 0; i < same.size(); i += 100) {
    CHECK(same.r[i] == base.profile.r[i]);
    CHECK(same.u[i] == base.profile.u[i]);
    CHECK(same.du[i] == base.profile.du[i]);
  }
}

TEST_CASE("rescale: exact mass and action scaling") {
  auto spec = NonlinearitySpec::pure_power(3.0);
  GroundState base = ground_state(spec, 3, 1.0);
  const double beta = beta_exponent(3.0, 3);
  for (double mu : {0.25, 0.5, 2.0, 4.0}) {
    RadialProfile scaled = rescale_ground_state(spec, base, 3.0, mu);
    CHECK(mass(scaled) ==
          doctest::Approx(std::pow(mu, beta) * base.report.mass).epsilon(1e-12));
    CHECK(action(spec, mu, scaled) ==
          doctest::Approx(std::pow(mu, beta + 1.0) * base.report.action).epsilon(1e-9));
  }
}

TEST_CASE("rescale: agreement with fresh solves") {
  // The oracle never re-runs the bisection for mu != 1, so this is a genuine
  // two-route comparison.
  for (double p : {2.5, 3.5}) {
    auto spec = NonlinearitySpec::pure_power(p);
    GroundState base = ground_state(spec, 3, 1.0);
    for (double mu : {0.25, 4.0}) {
      GroundState fresh = ground_state(spec, 3, mu);
      RadialProfile predicted = rescale_ground_state(spec, base, p, mu);
      CHECK(fresh.report.mass == doctest::Approx(mass(predicted)).epsilon(1e-3));
      double amplitude = fresh.profile.u.front();
      for (std::size_t i = 0; i < fresh.profile.size(); i += 50) {
        double diff =
            fresh.profile.u[i] - profile_value(predicted, fresh.profile.r[i]);
        CHECK(std::abs(diff) <= 1e-3 * amplitude);
      }
    }
  }
}

TEST_CASE("rescale rejects the wrong family") {
  auto p3 = NonlinearitySpec::pure_power(3.0);
  auto cq = NonlinearitySpec::cubic_quintic(1.0, 1.0);
  GroundState base = ground_state(p3, 3, 1.0);
  CHECK_THROWS_AS(rescale_ground_state(cq, base, 3.0, 2.0), WrongFamilyError);
  CHECK_THROWS_AS(rescale_ground_state(p3, base, 2.5, 2.0), WrongFamilyError);

  GroundState off = ground_state(p3, 3, 2.0);
  CHECK_THROWS_AS(rescale_ground_state(p3, off, 3.0, 4.0), std::invalid_argument);
}

TEST_CASE("mass is scale-invariant at the critical exponent") {
  // beta(1 + 4/N, N) = 0: rescaling changes the action but not the mass.
  auto spec = NonlinearitySpec::pure_power(7.0 / 3.0);
  GroundState base = ground_state(spec, 3, 1.0);
  GroundState doubled = ground_state(spec, 3, 2.0);
  CHECK(doubled.report.mass == doctest::Approx(base.report.mass).epsilon(1e-3));
  CHECK(doubled.report.action ==
        doctest::Approx(2.0 * base.report.action).epsilon(1e-3));

  // the comparison-model level anchored at the solver's action
  double beta0 = base.report.action;
  CHECK(critical_model_level(1.0, 1.0, 3, beta0) == beta0);
  CHECK(critical_model_level(2.0, 3.0, 3, beta0) ==
        doctest::Approx(beta0 * 3.0 / (2.0 * std::sqrt(2.0))).epsilon(1e-12));
}

TEST_CASE("critical comparison-model level") {
  CHECK(critical_model_level(1.0, 1.0, 3, 2.7) == 2.7);
  CHECK(critical_model_level(1.0, 2.0, 3, 2.7) == doctest::Approx(5.4));
  // N = 2: delta -> 4 divides the level by 4
  CHECK(critical_model_level(4.0, 1.0, 2, 1.0) == doctest::Approx(0.25));
  CHECK(critical_model_level(4.0, 1.0, 3, 1.0) == doctest::Approx(0.125));
  CHECK_THROWS_AS(critical_model_level(0.0, 1.0, 3, 1.0), std::invalid_argument);
}
