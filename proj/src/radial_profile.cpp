#include "nls/radial_profile.hpp"

#include <cmath>
#include <stdexcept>

namespace nls {

namespace {

// Composite Simpson on uniformly spaced samples.  The solver always produces
// an even interval count; a trailing 3/8 block keeps odd counts at the same
// order just in case.
double simpson(const std::vector<double>& f, double h) {
  const std::size_t n = f.size();
  if (n < 2) return 0.0;
  const std::size_t intervals = n - 1;
  if (intervals == 1) return 0.5 * h * (f[0] + f[1]);
  if (intervals == 2) return h / 3.0 * (f[0] + 4.0 * f[1] + f[2]);

  std::size_t simpson_end = intervals;
  if (intervals % 2 == 1) simpson_end = intervals - 3;

  double acc = 0.0;
  if (simpson_end >= 2) {
    double odd = 0.0, even = 0.0;
    for (std::size_t i = 1; i < simpson_end; i += 2) odd += f[i];
    for (std::size_t i = 2; i < simpson_end; i += 2) even += f[i];
    acc += h / 3.0 * (f[0] + 4.0 * odd + 2.0 * even + f[simpson_end]);
  }
  if (simpson_end != intervals) {
    const std::size_t k = intervals;
    acc += 3.0 * h / 8.0 * (f[k - 3] + 3.0 * f[k - 2] + 3.0 * f[k - 1] + f[k]);
  }
  return acc;
}

double rpow(double r, int k) {
  double acc = 1.0;
  for (int i = 0; i < k; ++i) acc *= r;
  return acc;
}

template <class F>
double radial_integral(const RadialProfile& u, F&& integrand) {
  const int k = u.dim - 1;
  std::vector<double> f(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) f[i] = integrand(i) * rpow(u.r[i], k);
  return simpson(f, u.spacing());
}

}  // namespace

void RadialProfile::validate() const {
  if (dim < 2) throw std::invalid_argument("RadialProfile: dim must be >= 2");
  if (r.size() < 2 || r.size() != u.size() || r.size() != du.size())
    throw std::invalid_argument("RadialProfile: grid/value/derivative lengths mismatch");
  if (r.front() != 0.0)
    throw std::invalid_argument("RadialProfile: grid must start at r = 0");
  if (du.front() != 0.0)
    throw std::invalid_argument("RadialProfile: du(0) must vanish");
  const double h = r[1] - r[0];
  if (!(h > 0.0)) throw std::invalid_argument("RadialProfile: grid must increase");
  for (std::size_t i = 1; i < r.size(); ++i) {
    if (!(r[i] > r[i - 1]))
      throw std::invalid_argument("RadialProfile: grid must be strictly increasing");
    if (std::abs((r[i] - r[i - 1]) - h) > 1e-9 * h)
      throw std::invalid_argument("RadialProfile: grid must be uniform");
  }
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (!std::isfinite(u[i]) || !std::isfinite(du[i]))
      throw std::invalid_argument("RadialProfile: values must be finite");
  }
}

double unit_sphere_area(int dim) {
  if (dim < 2) throw std::invalid_argument("unit_sphere_area: dim must be >= 2");
  return 2.0 * std::pow(M_PI, 0.5 * dim) / std::tgamma(0.5 * dim);
}

double mass(const RadialProfile& u) {
  double integral = radial_integral(u, [&](std::size_t i) { return u.u[i] * u.u[i]; });
  return 0.5 * unit_sphere_area(u.dim) * integral;
}

double grad_norm_sq(const RadialProfile& u) {
  double integral = radial_integral(u, [&](std::size_t i) { return u.du[i] * u.du[i]; });
  return unit_sphere_area(u.dim) * integral;
}

double potential(const NonlinearitySpec& spec, const RadialProfile& u) {
  double integral = radial_integral(u, [&](std::size_t i) { return spec.G(u.u[i]); });
  return unit_sphere_area(u.dim) * integral;
}

double action(const NonlinearitySpec& spec, double mu, const RadialProfile& u) {
  return 0.5 * grad_norm_sq(u) + mu * mass(u) - potential(spec, u);
}

double pohozaev(const NonlinearitySpec& spec, double mu, const RadialProfile& u) {
  return 0.5 * (u.dim - 2) * grad_norm_sq(u) + u.dim * (mu * mass(u) - potential(spec, u));
}

double j_m(const NonlinearitySpec& spec, double mu, double m, const RadialProfile& u) {
  return action(spec, mu, u) - mu * m;
}

FunctionalReport functional_report(const NonlinearitySpec& spec, double mu,
                                   const RadialProfile& u,
                                   std::optional<double> mass_target) {
  FunctionalReport rep;
  rep.mass = mass(u);
  rep.grad_sq = grad_norm_sq(u);
  rep.potential = potential(spec, u);
  rep.action = 0.5 * rep.grad_sq + mu * rep.mass - rep.potential;
  rep.pohozaev = 0.5 * (u.dim - 2) * rep.grad_sq + u.dim * (mu * rep.mass - rep.potential);
  if (mass_target) rep.j_m = rep.action - mu * *mass_target;
  return rep;
}

RadialProfile dilate(const RadialProfile& u, double t) {
  if (!(t > 0.0) || !std::isfinite(t))
    throw std::invalid_argument("dilate: scale must be positive");
  RadialProfile out;
  out.dim = u.dim;
  out.r.resize(u.size());
  out.u = u.u;
  out.du.resize(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    out.r[i] = t * u.r[i];
    out.du[i] = u.du[i] / t;
  }
  return out;
}

double profile_value(const RadialProfile& u, double x) {
  if (x <= 0.0) return u.u.front();
  const double h = u.spacing();
  if (x >= u.r.back()) return 0.0;
  std::size_t k = static_cast<std::size_t>(x / h);
  if (k + 1 >= u.size()) k = u.size() - 2;
  const double t = (x - u.r[k]) / h;
  const double t2 = t * t, t3 = t2 * t;
  const double h00 = 2 * t3 - 3 * t2 + 1;
  const double h10 = t3 - 2 * t2 + t;
  const double h01 = -2 * t3 + 3 * t2;
  const double h11 = t3 - t2;
  return h00 * u.u[k] + h10 * h * u.du[k] + h01 * u.u[k + 1] + h11 * h * u.du[k + 1];
}

}  // namespace nls
