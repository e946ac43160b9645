#pragma once

#include <optional>
#include <vector>

#include "nls/nonlinearity.hpp"

namespace nls {

// Radial function u(|x|) on a uniform grid r_0 = 0 < r_1 < ... < r_K.
// Derivative samples come from the integrator rather than re-differencing,
// which keeps the gradient norm free of differentiation noise.
struct RadialProfile {
  int dim = 3;
  std::vector<double> r;
  std::vector<double> u;
  std::vector<double> du;

  std::size_t size() const { return r.size(); }
  double spacing() const { return r.size() > 1 ? r[1] - r[0] : 0.0; }

  // Throws std::invalid_argument on malformed data (non-uniform or
  // non-increasing grid, grid not starting at 0, du[0] != 0, non-finite
  // entries, mismatched lengths).
  void validate() const;
};

// All functionals of the free problem evaluated on one profile.
// action = grad_sq/2 + mu*mass - potential and
// pohozaev = (N-2)/2*grad_sq + N*(mu*mass - potential) are assembled from the
// three base integrals, never integrated separately.
struct FunctionalReport {
  double mass = 0;       // (1/2) ||u||_2^2
  double grad_sq = 0;    // ||grad u||_2^2
  double potential = 0;  // integral of G(u) over R^N
  double action = 0;
  double pohozaev = 0;
  std::optional<double> j_m;  // action - mu*m when a mass target was given
};

// Area of the unit sphere S^{N-1}: 2 pi^{N/2} / Gamma(N/2).
double unit_sphere_area(int dim);

double mass(const RadialProfile& u);
double grad_norm_sq(const RadialProfile& u);
double potential(const NonlinearitySpec& spec, const RadialProfile& u);
double action(const NonlinearitySpec& spec, double mu, const RadialProfile& u);
double pohozaev(const NonlinearitySpec& spec, double mu, const RadialProfile& u);
double j_m(const NonlinearitySpec& spec, double mu, double m, const RadialProfile& u);

FunctionalReport functional_report(const NonlinearitySpec& spec, double mu,
                                   const RadialProfile& u,
                                   std::optional<double> mass_target = std::nullopt);

// u(x) -> u(x/t): grid scaled by t, values unchanged, derivatives scaled by
// 1/t.  Mass scales by t^N and the gradient norm by t^{N-2}.
RadialProfile dilate(const RadialProfile& u, double t);

// Cubic Hermite evaluation of the profile at radius x (clamped to the grid;
// beyond the last node the profile is treated as zero).
double profile_value(const RadialProfile& u, double x);

}  // namespace nls
