#pragma once

#include <utility>
#include <vector>

#include "nls/nonlinearity.hpp"
#include "nls/radial_profile.hpp"

namespace nls {

// Classification of one shot u(0) = u0, u'(0) = 0 of the radial equation
// u'' + (N-1)/r u' = mu u - g(u).
struct ShootOutcome {
  enum class Kind {
    Overshoot,   // u crossed zero: the height is too large
    Undershoot,  // u' turned around (or u never decayed): too small
    Decay,       // the trajectory entered the linear-decay funnel
  };
  Kind kind = Kind::Undershoot;
  double event_radius = 0;
};

struct ShootOptions {
  double action_tol = 1e-6;    // relative action window for the critical set
  double pohozaev_tol = 1e-6;  // certificate |P| <= tol * grad_sq
  double tail_tol = 1e-12;     // |u(r_K)| <= tol * u(0)
  // Decay funnel: u < funnel_entry * u(0), u' < 0, and the slope matches the
  // linearized tail to graft_slope_tol * sqrt(mu) * u.
  double funnel_entry = 1e-3;
  double graft_slope_tol = 1e-4;
  // Initial-height sweep window [seed_low, seed_high] * s_G, where s_G is the
  // smallest height with G(s) > mu s^2 / 2.
  double seed_low = 1.0 + 1e-6;
  double seed_high = 50.0;
  double height_max_factor = 1e6;  // give up bracketing past this multiple of s_G
  double walk_ratio = 1.25;        // geometric step of the bracket walk
  double overflow_limit = 1e12;
  int max_range_doublings = 6;     // event-range extensions for plateau states
};

struct Residuals {
  double pohozaev_rel = 0;  // |P| / grad_sq
  double tail_rel = 0;      // |u(r_K)| / u(0)
  double ode_defect = 0;    // max finite-difference equation residual / (mu u(0))
};

// A converged positive radial ground state of -Delta u + mu u = g(u).
struct GroundState {
  double mu = 0;
  RadialProfile profile;
  FunctionalReport report;
  double shoot_height = 0;  // u(0)
  Residuals residuals;
};

// Fixed-step RK4 integration of the radial equation from r = 0, stopping at
// the first event or at r_max.  The first step uses the series expansion
// u(r) = u0 + (mu u0 - g(u0)) r^2/(2N) + O(r^4) to pass the coordinate
// singularity.  Throws OverflowError if |u| exceeds the overflow limit.
std::pair<RadialProfile, ShootOutcome> integrate_radial(
    const NonlinearitySpec& spec, int dim, double mu, double u0, double r_max,
    double h, const ShootOptions& opts = {});

// Bisects the initial height between an undershooting and an overshooting
// bracket until a shot enters the decay funnel (continuing to floating-point
// exhaustion where necessary: near mu_star flat-top states leave only a few
// representable heights inside the funnel window), grafts the linearized
// exponential tail beyond the funnel entry radius, and certifies the result
// (Pohozaev residual, positivity, positive action).  Throws NoBracketError
// when no overshoot exists (the frequency is at or beyond mu_star) and
// NonConvergentError when no representable height decays or the certificates
// fail.
GroundState ground_state(const NonlinearitySpec& spec, int dim, double mu,
                         const ShootOptions& opts = {});

// Runs the bracket search from n_starts geometrically spaced seeds,
// deduplicates by shoot height (relative gap < 1e-6), keeps the states whose
// action lies within action_tol of the minimum found, and sorts by mass.
std::vector<GroundState> multi_start_ground_states(const NonlinearitySpec& spec,
                                                   int dim, double mu, int n_starts,
                                                   const ShootOptions& opts = {});

// min(0.01, 0.1/sqrt(mu)) / max(1, u0), additionally capped at
// 0.015 / sqrt(mu + |g'(u0)|) so steep cores stay resolved.
double default_step(const NonlinearitySpec& spec, double mu, double u0);
// ln(1e12)/sqrt(mu): the linearized tail decays below 1e-12 relative
double default_r_max(double mu);

}  // namespace nls
