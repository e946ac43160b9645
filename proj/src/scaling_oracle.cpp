#include "nls/scaling_oracle.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "nls/errors.hpp"

namespace nls {

double beta_exponent(double p, int dim) {
  if (!(p > 1.0)) throw std::invalid_argument("beta_exponent: need p > 1");
  if (dim < 2) throw std::invalid_argument("beta_exponent: need dim >= 2");
  return 2.0 / (p - 1.0) - 0.5 * dim;
}

PowerScalingLaw PowerScalingLaw::make(double p, int dim) {
  double p_max = sobolev_critical_exponent(dim) - 1.0;
  if (!(p > 1.0) || !(p < p_max)) {
    std::ostringstream os;
    os << "PowerScalingLaw: exponent " << p << " outside (1, " << p_max << ")";
    throw std::invalid_argument(os.str());
  }
  return {p, dim, beta_exponent(p, dim)};
}

RadialProfile rescale_ground_state(const NonlinearitySpec& base_spec,
                                   const GroundState& base, double p, double mu) {
  if (base_spec.family() != NonlinearitySpec::Family::PurePower ||
      base_spec.power() != p) {
    std::ostringstream os;
    os << "rescale_ground_state: base state must come from power:p=" << p
       << ", got " << base_spec.describe();
    throw WrongFamilyError(os.str());
  }
  if (std::abs(base.mu - 1.0) > 1e-12)
    throw std::invalid_argument("rescale_ground_state: base state must be solved at mu = 1");
  if (!(mu > 0.0)) throw std::invalid_argument("rescale_ground_state: mu must be positive");

  const double amp = std::pow(mu, 1.0 / (p - 1.0));
  const double root_mu = std::sqrt(mu);
  RadialProfile out;
  out.dim = base.profile.dim;
  out.r.resize(base.profile.size());
  out.u.resize(base.profile.size());
  out.du.resize(base.profile.size());
  for (std::size_t i = 0; i < base.profile.size(); ++i) {
    out.r[i] = base.profile.r[i] / root_mu;
    out.u[i] = amp * base.profile.u[i];
    out.du[i] = amp * root_mu * base.profile.du[i];
  }
  return out;
}

double critical_model_level(double delta, double mu, int dim, double beta0) {
  if (!(delta > 0.0) || !(mu > 0.0))
    throw std::invalid_argument("critical_model_level: delta and mu must be positive");
  if (dim < 2) throw std::invalid_argument("critical_model_level: dim must be >= 2");
  return beta0 * std::pow(delta, -0.5 * dim) * mu;
}

}  // namespace nls
