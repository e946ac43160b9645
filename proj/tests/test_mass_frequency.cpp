#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "nls/errors.hpp"
#include "nls/mass_frequency.hpp"
#include "nls/scaling_oracle.hpp"

using namespace nls;

namespace {

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i)
    g[i] = std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * i / (n - 1.0));
  return g;
}

const auto power3 = NonlinearitySpec::pure_power(3.0);

// One shared cubic power curve keeps the suite fast.
const FrequencyCurve& power_curve() {
  static const FrequencyCurve curve = scan(power3, 3, log_grid(0.05, 20.0, 12), 4);
  return curve;
}

}  // namespace

TEST_CASE("scan invariants on a pure-power curve") {
  const auto& curve = power_curve();
  REQUIRE(curve.samples.size() == 12);
  CHECK(curve.gaps.empty());
  for (std::size_t i = 0; i < curve.samples.size(); ++i) {
    const auto& s = curve.samples[i];
    CHECK(s.a > 0.0);
    CHECK(s.c_minus > 0.0);
    CHECK(s.c_minus <= s.c_plus);
    CHECK(s.n_states >= 1);
    if (i > 0) CHECK(s.a > curve.samples[i - 1].a);
  }
}

TEST_CASE("single-point grid gives a one-sample curve") {
  FrequencyCurve curve = scan(power3, 3, {1.0}, 2);
  REQUIRE(curve.samples.size() == 1);
  CHECK(curve.samples[0].mu == 1.0);
}

TEST_CASE("scan validates its grid") {
  CHECK_THROWS_AS(scan(power3, 3, {}, 2), std::invalid_argument);
  CHECK_THROWS_AS(scan(power3, 3, {1.0, 0.5}, 2), std::invalid_argument);
  CHECK_THROWS_AS(scan(power3, 3, {-1.0, 0.5}, 2), std::invalid_argument);
  auto cq = NonlinearitySpec::cubic_quintic(1.0, 1.0);
  CHECK_THROWS_AS(scan(cq, 3, {0.1, 0.25}, 2), std::invalid_argument);
}

TEST_CASE("pure-power action ratio a(4)/a(1)") {
  FrequencyCurve curve = scan(power3, 3, {1.0, 4.0}, 4);
  REQUIRE(curve.samples.size() == 2);
  CHECK(curve.samples[1].a / curve.samples[0].a == doctest::Approx(2.0).epsilon(1e-3));
}

TEST_CASE("b_m identity holds exactly at every sample") {
  const auto& curve = power_curve();
  for (double m : {0.0, 0.5, 2.0}) {
    auto bm = b_m_curve(curve, m);
    REQUIRE(bm.size() == curve.samples.size());
    for (std::size_t i = 0; i < bm.size(); ++i) {
      CHECK(bm[i].first == curve.samples[i].mu);
      // round-trip of the defining identity, up to one rounding step
      CHECK(bm[i].second + m * bm[i].first ==
            doctest::Approx(curve.samples[i].a).epsilon(1e-15));
      if (m == 0.0) CHECK(bm[i].second == curve.samples[i].a);
    }
  }
}

TEST_CASE("b_m maximum of a pure power sits at mu = (a0/2m)^2") {
  // a(mu) = a0 sqrt(mu) for p = 3, N = 3, so b_m peaks where a0/(2 sqrt(mu)) = m.
  const auto& curve = power_curve();
  const double a0 = scan(power3, 3, {1.0}, 4).samples[0].a;
  const double m = 2.0;
  const double mu_peak = std::pow(a0 / (2.0 * m), 2.0);

  auto dense = scan(power3, 3, log_grid(0.5 * mu_peak, 2.0 * mu_peak, 9), 4);
  auto bm = b_m_curve(dense, m);
  std::size_t best = 0;
  for (std::size_t i = 1; i < bm.size(); ++i)
    if (bm[i].second > bm[best].second) best = i;
  // discrete argmax lands on the sample nearest the analytic peak
  CHECK(std::abs(std::log(bm[best].first / mu_peak)) <
        std::log(dense.samples[1].mu / dense.samples[0].mu));
  (void)curve;
}

TEST_CASE("c_star on a monotone curve flags the boundary") {
  // c(mu) = c0 mu^{-1/2} is strictly decreasing: argmin at the upper endpoint.
  CStarResult cs = c_star(power_curve());
  CHECK(cs.at_boundary);
  CHECK(cs.mu == power_curve().samples.back().mu);
  CHECK(cs.c_star == power_curve().samples.back().c_minus);
}

TEST_CASE("c_star on a single-sample curve returns it") {
  FrequencyCurve curve = scan(power3, 3, {1.0}, 2);
  CStarResult cs = c_star(curve);
  CHECK(cs.at_boundary);
  CHECK(cs.c_star == curve.samples[0].c_minus);
}

TEST_CASE("find_normalized inverts the pure-power mass curve") {
  const auto& curve = power_curve();
  const double c0 = scan(power3, 3, {1.0}, 4).samples[0].c_minus;
  const double m = 0.5 * c0;  // root at mu = (m/c0)^{-2} = 4
  auto solutions = find_normalized(curve, m, 1e-3);
  REQUIRE(solutions.size() == 1);
  const auto& sol = solutions[0];
  CHECK(sol.mu == doctest::Approx(4.0).epsilon(2e-3));
  CHECK(sol.mass_error <= 1e-3);
  CHECK(sol.classification == NormalizedSolution::Branch::BmLocalMax);
  // c is decreasing through m, so the crossing is a local maximum of b_m
  CHECK(sol.j_m == doctest::Approx(sol.state.report.action - sol.mu * m).epsilon(1e-12));

  // sandwich: m lies between the extremal masses at the root
  CHECK(sol.state.report.mass >= m * (1.0 - 2e-3));
  CHECK(sol.state.report.mass <= m * (1.0 + 2e-3));

  // lower bound: j_m >= b_m at the root frequency
  double a_root = sol.state.report.grad_sq / 3.0;
  CHECK(sol.j_m >= a_root - sol.mu * m - 1e-6 * std::abs(sol.j_m));
}

TEST_CASE("find_normalized reports no solution without a bracket") {
  // c ranges over [c(20), c(0.05)] on the scanned window; a mass above the
  // window's top cannot be bracketed
  const auto& curve = power_curve();
  double c_top = curve.samples.front().c_minus;
  CHECK_THROWS_AS(find_normalized(curve, 2.0 * c_top, 1e-3), NoSolutionError);
  CHECK_THROWS_AS(find_normalized(curve, -1.0, 1e-3), std::invalid_argument);
}

TEST_CASE("derivative law for the cubic power at mu = 1") {
  DerivativeCheck d = check_derivative(power3, 3, 1.0, 1e-3, 4);
  CHECK(d.rel_err <= 1e-2);
  CHECK(d.fd_plus == doctest::Approx(d.c_minus_val).epsilon(1e-2));
  CHECK(d.fd_minus == doctest::Approx(d.c_plus_val).epsilon(1e-2));
}

TEST_CASE("derivative consistency improves as h shrinks") {
  DerivativeCheck coarse = check_derivative(power3, 3, 1.0, 4e-2, 2);
  DerivativeCheck fine = check_derivative(power3, 3, 1.0, 1e-2, 2);
  CHECK(fine.rel_err < coarse.rel_err);
}

TEST_CASE("asymptotic fit recovers the pure-power exponents") {
  FrequencyCurve curve = scan(power3, 3, log_grid(1e-3, 8e-3, 6), 4);
  AsymptoticReport rep = check_asymptotics(curve, AsymptoticReport::End::ZeroPlus);
  CHECK(rep.predicted_mass_slope == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(rep.predicted_action_slope == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(std::abs(rep.fitted_mass_slope - rep.predicted_mass_slope) <= 0.02);
  CHECK(std::abs(rep.fitted_action_slope - rep.predicted_action_slope) <= 0.02);
}

TEST_CASE("asymptotics flags divergence toward mu_star") {
  auto cq = NonlinearitySpec::cubic_quintic(1.0, 1.0);
  FrequencyCurve curve = scan(cq, 3, log_grid(0.05, 0.16, 6), 4);
  AsymptoticReport rep = check_asymptotics(curve, AsymptoticReport::End::MuStarMinus);
  CHECK(rep.a_increasing);
  CHECK(rep.c_increasing);  // whole window sits right of the interior minimum
  CHECK(rep.c_end_over_interior_min > 1.0);
}

TEST_CASE("root classification is consistent with the discrete b_m") {
  // At a falling crossing (local maximum of b_m) the neighboring samples of
  // b_m lie at or below the root value.
  const auto& curve = power_curve();
  const double c0 = scan(power3, 3, {1.0}, 4).samples[0].c_minus;
  const double m = 0.5 * c0;
  auto solutions = find_normalized(curve, m, 1e-3);
  REQUIRE(solutions.size() == 1);
  const auto& sol = solutions[0];
  REQUIRE(sol.classification == NormalizedSolution::Branch::BmLocalMax);
  const double b_root = sol.state.report.grad_sq / 3.0 - m * sol.mu;
  for (const auto& s : curve.samples) {
    if (s.mu < 0.5 * sol.mu || s.mu > 2.0 * sol.mu) continue;
    CHECK(s.a - m * s.mu <= b_root + 1e-6 * std::abs(b_root));
  }
}

TEST_CASE("asymptotics demands four samples within the end decade") {
  FrequencyCurve sparse = scan(power3, 3, log_grid(0.05, 20.0, 4), 2);
  CHECK_THROWS_AS(check_asymptotics(sparse, AsymptoticReport::End::ZeroPlus),
                  InsufficientSamplesError);
}

TEST_CASE("dilation path maximum equals the least-energy level") {
  GroundState st = ground_state(power3, 3, 1.0);
  double level = st.report.grad_sq / 3.0;
  double path_max = dilation_path_max(power3, 1.0, st.profile);
  CHECK(std::abs(path_max - level) <= 2e-6 * level);
}

TEST_CASE("default grids respect mu_star") {
  auto cq = NonlinearitySpec::cubic_quintic(1.0, 1.0);
  auto grid_cq = default_mu_grid(cq, 16);
  CHECK(grid_cq.size() == 16);
  CHECK(grid_cq.front() >= 1e-3);
  CHECK(grid_cq.back() == doctest::Approx(0.98 * 0.1875).epsilon(1e-12));

  auto grid_p = default_mu_grid(power3, 8);
  CHECK(grid_p.front() == doctest::Approx(1e-3).epsilon(1e-12));
  CHECK(grid_p.back() == doctest::Approx(1e2).epsilon(1e-12));
}

TEST_CASE("interior minima diagnostic") {
  FrequencyCurve curve;  // synthetic samples, only c_minus matters here
  curve.samples = {{0.1, 1.0, 5.0, 5.0, 1},
                   {0.2, 2.0, 3.0, 3.0, 1},
                   {0.3, 3.0, 4.0, 4.0, 1},
                   {0.4, 4.0, 2.0, 2.0, 1},
                   {0.5, 5.0, 6.0, 6.0, 1}};
  CHECK(count_interior_minima(curve) == 2);
}
