#pragma once

#include "nls/nonlinearity.hpp"
#include "nls/radial_profile.hpp"
#include "nls/shooting.hpp"

namespace nls {

// Analytic scaling law for pure-power nonlinearities: the ground state at
// frequency mu is mu^{1/(p-1)} u_1(sqrt(mu) x), so mass scales by mu^beta and
// action by mu^{beta+1} with beta = 2/(p-1) - N/2.  Used as an independent
// check of the shooting solver; it never re-runs the bisection.
struct PowerScalingLaw {
  double p = 0;
  int dim = 0;
  double beta = 0;

  static PowerScalingLaw make(double p, int dim);
};

double beta_exponent(double p, int dim);

// Rescales a mu = 1 pure-power ground state to frequency mu:
// values * mu^{1/(p-1)}, grid / sqrt(mu), derivatives * mu^{1/(p-1)+1/2}.
// Throws WrongFamilyError unless base_spec is PurePower(p), and
// std::invalid_argument unless the base state was solved at mu = 1.
RadialProfile rescale_ground_state(const NonlinearitySpec& base_spec,
                                   const GroundState& base, double p, double mu);

// Least-energy level of the mass-critical comparison model
// -Delta u + mu u = delta u^{1+4/N}: beta0 * delta^{-N/2} * mu, where beta0 is
// the level at delta = mu = 1.
double critical_model_level(double delta, double mu, int dim, double beta0);

}  // namespace nls
