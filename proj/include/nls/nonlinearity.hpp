#pragma once

#include <memory>
#include <string>
#include <vector>

namespace nls {

struct PowerTerm {
  double coefficient = 0;
  double exponent = 0;  // > 1
};

// Nonlinearity g(s) on the right-hand side of -Delta u + mu u = g(u),
// together with its antiderivative G(s) = int_0^s g(t) dt.
//
// Every family is extended by g(s) = -s (hence G(s) = -s^2/2) on s < 0, so
// the shooting solver always sees a globally defined right-hand side and
// converged states come out non-negative.
class NonlinearitySpec {
 public:
  enum class Family { PurePower, CombinedPowers, CubicQuintic, Truncated };

  // g(s) = s^p, p > 1.
  static NonlinearitySpec pure_power(double p);
  // g(s) = sum_k c_k s^{p_k}, each p_k > 1 and at least one term.
  static NonlinearitySpec combined_powers(std::vector<PowerTerm> terms);
  // g(s) = a s^3 - b s^5 with a, b > 0.
  static NonlinearitySpec cubic_quintic(double a, double b);

  Family family() const { return family_; }
  double power() const { return power_; }
  const std::vector<PowerTerm>& terms() const { return terms_; }
  double cubic_coefficient() const { return cubic_; }
  double quintic_coefficient() const { return quintic_; }
  const NonlinearitySpec& inner() const { return *inner_; }
  double cutoff() const { return cutoff_; }  // s1 of a truncated family

  double g(double s) const;
  double G(double s) const;
  // One-sided derivatives of g, used for the series start of the integrator
  // (evaluated at positive heights only).
  double dg(double s) const;
  double d2g(double s) const;

  std::string describe() const;

 private:
  friend NonlinearitySpec truncate(const NonlinearitySpec& spec);
  NonlinearitySpec() = default;

  Family family_ = Family::PurePower;
  double power_ = 0;
  std::vector<PowerTerm> terms_;
  double cubic_ = 0;
  double quintic_ = 0;
  std::shared_ptr<const NonlinearitySpec> inner_;
  double cutoff_ = 0;
};

// Frequency threshold mu_star = sup_{s>0} 2 G(s)/s^2.  Closed form for pure
// powers (+inf) and the cubic-quintic family (3 a^2 / (16 b)); numeric
// maximization otherwise.  Returns +inf when the objective is detected
// unbounded.
double mu_star(const NonlinearitySpec& spec);

// Forces the grid + golden-section maximization path even for families with
// a closed form; used to cross-check the closed forms.
double mu_star_numeric(const NonlinearitySpec& spec);

// Replaces g by the function that vanishes above its smallest zero s1 located
// beyond the first height with positive potential energy.  The truncated
// family always has finite mu_star.  Throws NoZeroFoundError when g stays
// positive on the scanned range (e.g. pure powers).
NonlinearitySpec truncate(const NonlinearitySpec& spec);

struct RegimeReport {
  double p0 = 0;  // leading exponent of g at s -> 0+
  double p0_coefficient = 0;

  enum class Tail {
    PowerGrowth,     // g(s) ~ c s^{p_infinity}, c > 0
    NonSuperlinear,  // g(s)/s bounded above at infinity (saturating families)
    Indeterminate,
  };
  Tail tail = Tail::Indeterminate;
  double p_infinity = 0;  // meaningful only when tail == PowerGrowth

  bool p0_mass_supercritical = false;   // p0 > 1 + 4/N
  bool p0_sobolev_subcritical = false;  // p0 < 2* - 1
  bool mu_star_finite = false;

  // Which solution-count structure the mass curve should exhibit.
  enum class Regime {
    SupercriticalAtInfinity,  // one normalized solution for every mass
    SubcriticalAtInfinity,    // c_* threshold with 0/1/2 solutions
    Indeterminate,
  };
  Regime regime = Regime::Indeterminate;
};

// Reports the growth exponents of g at 0 and infinity and the resulting
// solution-count regime for dimension N.  Throws UnsupportedRegimeError when
// the leading exponent at zero is not superlinear.
RegimeReport classify(const NonlinearitySpec& spec, int dim);

// 2N/(N-2) for N >= 3, +inf for N = 2.
double sobolev_critical_exponent(int dim);
// 1 + 4/N, the exponent at which the mass of rescaled states is invariant.
double mass_critical_exponent(int dim);

}  // namespace nls
