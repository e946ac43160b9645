#pragma once

#include <string>
#include <utility>
#include <vector>

#include "nls/nonlinearity.hpp"
#include "nls/shooting.hpp"

namespace nls {

// Sampled frequency curves mu -> (a, c_minus, c_plus).  a is the least-energy
// level, evaluated as grad_sq / N on the converged state; c_minus/c_plus are
// the extremal masses over the minimal-action states found by multi-start.
struct FrequencyCurve {
  struct Sample {
    double mu = 0;
    double a = 0;
    double c_minus = 0;
    double c_plus = 0;
    int n_states = 0;
  };

  NonlinearitySpec spec = NonlinearitySpec::pure_power(3);
  int dim = 3;
  int n_starts = 8;
  std::vector<Sample> samples;         // sorted by mu; failed points omitted
  std::vector<std::string> gaps;       // diagnostics for omitted points
};

// A (mu, u) pair solving the equation together with the mass constraint
// (1/2)||u||^2 = m; mu plays the role of the Lagrange multiplier.
struct NormalizedSolution {
  enum class Branch { BmLocalMin, BmLocalMax, Unclassified };

  double mu = 0;
  GroundState state;
  double mass_target = 0;
  double mass_error = 0;  // |mass - m| / m
  double j_m = 0;         // action - mu * m
  Branch classification = Branch::Unclassified;
};

// Solves every grid frequency (concurrently; see NLS_THREADS) and assembles
// the curve.  Failed frequencies are recorded as gaps, never interpolated.
// Throws EmptyCurveError when every point fails and std::invalid_argument on
// an unsorted or out-of-range grid.
FrequencyCurve scan(const NonlinearitySpec& spec, int dim,
                    const std::vector<double>& mu_grid, int n_starts,
                    const ShootOptions& opts = {});

// Log-spaced default grid: [max(1e-3, 1e-3 mu_star), 0.98 mu_star] when
// mu_star is finite, [1e-3, 1e2] otherwise.
std::vector<double> default_mu_grid(const NonlinearitySpec& spec, int count = 32);

// b_m(mu) = a(mu) - m mu at each sample.
std::vector<std::pair<double, double>> b_m_curve(const FrequencyCurve& curve, double m);

struct CStarResult {
  double c_star = 0;
  double mu = 0;
  bool at_boundary = false;  // discrete argmin fell on an endpoint sample
};

// inf of c_minus over the curve, refined by golden section with fresh solves
// when the discrete argmin is interior.
CStarResult c_star(const FrequencyCurve& curve, const ShootOptions& opts = {});

// Locates every crossing of the extremal-mass curves with the level m and
// refines each by bisection on mu with fresh solves until the mass matches
// within tol (and the mu bracket is tight).  Crossings on a falling branch
// are local maxima of b_m, on a rising branch local minima.  Throws
// NoSolutionError when no bracket exists.
std::vector<NormalizedSolution> find_normalized(const FrequencyCurve& curve,
                                                double m, double tol = 1e-3,
                                                const ShootOptions& opts = {});

struct DerivativeCheck {
  double fd_plus = 0;      // (a(mu+h) - a(mu)) / h, expected c_minus(mu)
  double fd_minus = 0;     // (a(mu) - a(mu-h)) / h, expected c_plus(mu)
  double fd_central = 0;   // second-order quotient; equals c where c_minus = c_plus
  double c_minus_val = 0;
  double c_plus_val = 0;
  double rel_err = 0;          // worst one-sided deviation
  double rel_err_central = 0;  // central quotient against both extremal masses
};

// One-sided difference quotients of a(mu) against the extremal masses.
DerivativeCheck check_derivative(const NonlinearitySpec& spec, int dim, double mu,
                                 double h, int n_starts = 8,
                                 const ShootOptions& opts = {});

struct AsymptoticReport {
  enum class End { ZeroPlus, MuStarMinus };
  End end = End::ZeroPlus;
  int n_samples = 0;

  // ZeroPlus: log-log least-squares slopes over the end samples.
  double fitted_action_slope = 0;
  double fitted_mass_slope = 0;
  double predicted_action_slope = 0;  // beta + 1
  double predicted_mass_slope = 0;    // beta

  // MuStarMinus: divergence indicators (no exponent is predicted there).
  bool a_increasing = false;
  bool c_increasing = false;
  double c_end_over_interior_min = 0;
  // Trend of a(mu)/mu over the end samples (last/first); relevant when the
  // upper end is mu -> infinity.  Reported without a pass/fail threshold.
  double action_over_mu_trend = 0;
};

// Fits or flags the end behavior of the curve.  Requires at least four
// samples within a decade of the chosen end (InsufficientSamplesError).
AsymptoticReport check_asymptotics(const FrequencyCurve& curve,
                                   AsymptoticReport::End end);

// Maximum of the action along the dilation path tau -> u(x/tau); for a
// converged state this equals grad_sq / N at tau = 1.
double dilation_path_max(const NonlinearitySpec& spec, double mu,
                         const RadialProfile& profile);

// Diagnostic: number of strict interior local minima of c_minus.
int count_interior_minima(const FrequencyCurve& curve);

}  // namespace nls
