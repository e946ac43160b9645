#include "nls/shooting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "nls/errors.hpp"

namespace nls {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct State {
  double r, u, v;
};

inline void rhs(const NonlinearitySpec& spec, int dim, double mu, double r,
                double u, double v, double& du, double& dv) {
  du = v;
  dv = mu * u - spec.g(u) - (dim - 1) * v / r;
}

inline void rk4_step(const NonlinearitySpec& spec, int dim, double mu, State& s,
                     double h) {
  double k1u, k1v, k2u, k2v, k3u, k3v, k4u, k4v;
  rhs(spec, dim, mu, s.r, s.u, s.v, k1u, k1v);
  rhs(spec, dim, mu, s.r + 0.5 * h, s.u + 0.5 * h * k1u, s.v + 0.5 * h * k1v, k2u, k2v);
  rhs(spec, dim, mu, s.r + 0.5 * h, s.u + 0.5 * h * k2u, s.v + 0.5 * h * k2v, k3u, k3v);
  rhs(spec, dim, mu, s.r + h, s.u + h * k3u, s.v + h * k3v, k4u, k4v);
  s.u += h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
  s.v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
  s.r += h;
}

enum class RawKind { Overshoot, Undershoot, Decay, End };

struct RawOutcome {
  RawKind kind = RawKind::End;
  double event_radius = 0;
  std::size_t event_index = 0;  // node index of the event
};

struct Trajectory {
  std::vector<double> r, u, v;
};

// Core stepper shared by classification and profile construction.
RawOutcome shoot(const NonlinearitySpec& spec, int dim, double mu, double u0,
                 double r_max, double h, const ShootOptions& opts,
                 Trajectory* record) {
  if (u0 < 0.0 || !std::isfinite(u0))
    throw std::invalid_argument("shoot: initial height must be >= 0");
  if (record) {
    std::size_t expect = static_cast<std::size_t>(r_max / h) + 2;
    record->r.reserve(expect);
    record->u.reserve(expect);
    record->v.reserve(expect);
    record->r.push_back(0.0);
    record->u.push_back(u0);
    record->v.push_back(0.0);
  }
  if (u0 == 0.0) {  // degenerate zero shot: identically zero trajectory
    if (record) {
      for (double r = h; r < r_max + 0.5 * h; r += h) {
        record->r.push_back(r);
        record->u.push_back(0.0);
        record->v.push_back(0.0);
      }
    }
    return {RawKind::Undershoot, 0.0, 0};
  }

  const double kappa = std::sqrt(mu);
  const double alpha = 0.5 * (dim - 1);
  const double rise_limit = 1.05 * u0;

  // Series start across the coordinate singularity.  With F(u) = mu u - g(u)
  // and u = u0 + c2 r^2 + c4 r^4 + c6 r^6, matching orders of
  // u'' + (N-1)/r u' = F(u) gives
  //   c2 = F(u0)/(2N),
  //   c4 = F'(u0) c2 / (4(N+2)),
  //   c6 = (F'(u0) c4 + F''(u0) c2^2 / 2) / (6(N+4)).
  // The series carries the first few nodes: stepping RK4 right at r = h would
  // see the friction derivative scales ~ 1/r^k of the singular region.
  const double c2 = (mu * u0 - spec.g(u0)) / (2.0 * dim);
  const double f1 = mu - spec.dg(u0);
  const double c4 = f1 * c2 / (4.0 * (dim + 2));
  const double c6 =
      (f1 * c4 - 0.5 * spec.d2g(u0) * c2 * c2) / (6.0 * (dim + 4));

  std::size_t series_nodes = 6;
  while (series_nodes > 1 && series_nodes * h >= r_max) --series_nodes;
  State s{};
  for (std::size_t i = 1; i <= series_nodes; ++i) {
    const double r = i * h;
    const double r2 = r * r;
    s.r = r;
    s.u = u0 + r2 * (c2 + r2 * (c4 + r2 * c6));
    s.v = r * (2.0 * c2 + r2 * (4.0 * c4 + r2 * 6.0 * c6));
    if (record && i < series_nodes) {
      record->r.push_back(s.r);
      record->u.push_back(s.u);
      record->v.push_back(s.v);
    }
  }

  double prev_v = s.v > 0.0 ? 1.0 : -1.0;  // armed only after v goes negative
  std::size_t index = series_nodes;

  for (;;) {
    if (record) {
      record->r.push_back(s.r);
      record->u.push_back(s.u);
      record->v.push_back(s.v);
    }
    if (!std::isfinite(s.u) || std::abs(s.u) > opts.overflow_limit) {
      std::ostringstream os;
      os << "shoot: |u| exceeded " << opts.overflow_limit << " at r = " << s.r;
      throw OverflowError(os.str());
    }
    if (s.u <= 0.0) return {RawKind::Overshoot, s.r, index};
    if (s.v < 0.0 && s.u < opts.funnel_entry * u0) {
      const double slope = -kappa - alpha / s.r;
      if (std::abs(s.v - slope * s.u) <= opts.graft_slope_tol * kappa * s.u)
        return {RawKind::Decay, s.r, index};
    }
    if (prev_v < 0.0 && s.v >= 0.0) return {RawKind::Undershoot, s.r, index};
    if (s.u > rise_limit && s.v > 0.0) return {RawKind::Undershoot, s.r, index};
    prev_v = s.v;
    if (s.r >= r_max - 0.5 * h) break;
    rk4_step(spec, dim, mu, s, h);
    ++index;
  }
  return {RawKind::End, s.r, index};
}

// Smallest positive s with f(s) > 0 located on a log grid and sharpened by
// bisection.  Returns -1 when f <= 0 everywhere on the scan.
template <class F>
double first_positive_height(F&& f) {
  const int count = 1800;
  const double llo = std::log(1e-9), lhi = std::log(1e9);
  double prev = 1e-9;
  for (int i = 0; i < count; ++i) {
    double s = std::exp(llo + (lhi - llo) * i / (count - 1.0));
    if (f(s) > 0.0) {
      double lo = prev, hi = s;
      for (int it = 0; it < 120 && (hi - lo) > 1e-14 * hi; ++it) {
        double mid = 0.5 * (lo + hi);
        if (f(mid) > 0.0)
          hi = mid;
        else
          lo = mid;
      }
      return hi;
    }
    prev = s;
  }
  return -1.0;
}

// First zero of g(s) - mu s above s_lo, +inf when it stays positive.  g - mu s
// is positive at the energy crossing s_lo itself, which keeps narrow bands
// near mu_star from being stepped over.
double band_top_above(const NonlinearitySpec& spec, double mu, double s_lo) {
  auto g_mu = [&](double s) { return spec.g(s) - mu * s; };
  const int count = 1200;
  const double llo = std::log(s_lo), lhi = std::log(std::max(1e9, 1e3 * s_lo));
  bool seen_positive = g_mu(s_lo) > 0.0;
  double prev = s_lo;
  for (int i = 1; i < count; ++i) {
    double s = std::exp(llo + (lhi - llo) * i / (count - 1.0));
    double val = g_mu(s);
    if (val > 0.0) {
      seen_positive = true;
      prev = s;
    } else if (seen_positive) {
      double lo = prev, hi = s;
      for (int it = 0; it < 120 && (hi - lo) > 1e-14 * hi; ++it) {
        double mid = 0.5 * (lo + hi);
        if (g_mu(mid) > 0.0)
          lo = mid;
        else
          hi = mid;
      }
      return 0.5 * (lo + hi);
    }
  }
  return kInf;
}

// Shared per-(spec, mu) solve context.  The event range r_cap is extended in
// place when a trajectory runs out of room (wide plateaus near mu_star), so
// later shots in the same solve see the extended range.
struct SolveContext {
  const NonlinearitySpec& spec;
  int dim;
  double mu;
  const ShootOptions& opts;
  double s_G;
  double band_top;
  double r_cap;
  int doublings = 0;

  RawOutcome classify(double u0) {
    for (;;) {
      RawOutcome out =
          shoot(spec, dim, mu, u0, r_cap, default_step(spec, mu, u0), opts, nullptr);
      if (out.kind != RawKind::End) return out;
      if (doublings >= opts.max_range_doublings) {
        std::ostringstream os;
        os << "ground_state: no event before r = " << r_cap << " at mu = " << mu
           << ", u0 = " << u0;
        throw NonConvergentError(os.str());
      }
      r_cap *= 2.0;
      ++doublings;
    }
  }
};

SolveContext make_context(const NonlinearitySpec& spec, int dim, double mu,
                          const ShootOptions& opts) {
  if (!(mu > 0.0) || !std::isfinite(mu))
    throw std::invalid_argument("ground_state: mu must be positive and finite");
  if (dim < 2) throw std::invalid_argument("ground_state: dim must be >= 2");

  double s_G = first_positive_height(
      [&](double s) { return spec.G(s) - 0.5 * mu * s * s; });
  if (s_G < 0.0) {
    std::ostringstream os;
    os << "ground_state: no height with positive potential energy at mu = " << mu
       << "; the frequency lies at or beyond mu_star";
    throw NoBracketError(os.str());
  }
  double top = band_top_above(spec, mu, s_G);
  return SolveContext{spec, dim, mu, opts, s_G, top, default_r_max(mu), 0};
}

// Finds an overshooting height above `lo` (an undershooting height).  With a
// bounded band the search halves the gap to the band top, which handles
// plateau states whose critical height hugs the top; with an unbounded band
// it walks up geometrically.  Returns {hi, true} or {u0, false} when the shot
// at u0 already entered the decay funnel.
struct HiSearch {
  double value = 0;
  bool is_bracket_top = true;
};

HiSearch find_overshoot(SolveContext& ctx, double& lo) {
  if (std::isfinite(ctx.band_top)) {
    double floor = lo;
    for (int j = 1; j <= 60; ++j) {
      double u0 = ctx.band_top - (ctx.band_top - floor) * std::ldexp(1.0, -j);
      if (!(u0 > lo)) continue;
      RawOutcome out = ctx.classify(u0);
      if (out.kind == RawKind::Overshoot) return {u0, true};
      if (out.kind == RawKind::Decay) return {u0, false};
      lo = u0;
    }
  } else {
    double u0 = 2.0 * lo;
    const double cap = ctx.opts.height_max_factor * ctx.s_G;
    while (u0 <= cap) {
      RawOutcome out = ctx.classify(u0);
      if (out.kind == RawKind::Overshoot) return {u0, true};
      if (out.kind == RawKind::Decay) return {u0, false};
      lo = u0;
      u0 *= 2.0;
    }
  }
  std::ostringstream os;
  os << "ground_state: no overshoot found at mu = " << ctx.mu
     << " (band top = " << ctx.band_top << "); mu at or beyond mu_star?";
  throw NoBracketError(os.str());
}

GroundState finalize(SolveContext& ctx, double u0) {
  const double h = default_step(ctx.spec, ctx.mu, u0);
  Trajectory traj;
  RawOutcome out = shoot(ctx.spec, ctx.dim, ctx.mu, u0, ctx.r_cap, h, ctx.opts, &traj);
  if (out.kind != RawKind::Decay) {
    std::ostringstream os;
    os << "ground_state: converged height did not reach the decay funnel at mu = "
       << ctx.mu << " (u0 = " << u0 << ")";
    throw NonConvergentError(os.str());
  }

  const double kappa = std::sqrt(ctx.mu);
  const double alpha = 0.5 * (ctx.dim - 1);
  const std::size_t graft = out.event_index;
  const double r_d = traj.r[graft];
  const double u_d = traj.u[graft];

  // Extend the grid so the grafted tail decays below 1e-12 of u(0); keep the
  // interval count even for Simpson.
  std::size_t extra = static_cast<std::size_t>(std::ceil(std::log(1e12) / (kappa * h))) + 1;
  std::size_t total = graft + 1 + extra;
  if ((total - 1) % 2 == 1) ++total;

  RadialProfile profile;
  profile.dim = ctx.dim;
  profile.r.assign(traj.r.begin(), traj.r.begin() + graft + 1);
  profile.u.assign(traj.u.begin(), traj.u.begin() + graft + 1);
  profile.du.assign(traj.v.begin(), traj.v.begin() + graft + 1);
  profile.r.resize(total);
  profile.u.resize(total);
  profile.du.resize(total);
  for (std::size_t i = graft + 1; i < total; ++i) {
    const double r = static_cast<double>(i) * h;
    const double val = u_d * std::pow(r_d / r, alpha) * std::exp(-kappa * (r - r_d));
    profile.r[i] = r;
    profile.u[i] = val;
    profile.du[i] = val * (-kappa - alpha / r);
  }

  for (std::size_t i = 0; i <= graft; ++i) {
    if (profile.u[i] <= 0.0)
      throw NonConvergentError("ground_state: profile lost positivity");
  }

  FunctionalReport report = functional_report(ctx.spec, ctx.mu, profile);

  Residuals res;
  res.pohozaev_rel = std::abs(report.pohozaev) / report.grad_sq;
  res.tail_rel = std::abs(profile.u.back()) / u0;

  // Equation defect by a 6th-order central difference of the stored
  // derivative samples, away from the graft point; at this order the residual
  // reflects the trajectory itself rather than the differencing.
  double defect = 0.0;
  if (graft >= 8) {
    const auto& du = profile.du;
    for (std::size_t i = 3; i + 4 <= graft; ++i) {
      const double d2u = (-du[i - 3] + 9.0 * du[i - 2] - 45.0 * du[i - 1] +
                          45.0 * du[i + 1] - 9.0 * du[i + 2] + du[i + 3]) /
                         (60.0 * h);
      const double resid = d2u + (ctx.dim - 1) * du[i] / profile.r[i] -
                           ctx.mu * profile.u[i] + ctx.spec.g(profile.u[i]);
      defect = std::max(defect, std::abs(resid));
    }
  }
  res.ode_defect = defect / (ctx.mu * u0);

  if (!(report.action > 0.0)) {
    std::ostringstream os;
    os << "ground_state: non-positive action " << report.action << " at mu = " << ctx.mu;
    throw NonConvergentError(os.str());
  }
  if (res.pohozaev_rel > ctx.opts.pohozaev_tol) {
    std::ostringstream os;
    os << "ground_state: Pohozaev residual " << res.pohozaev_rel
       << " exceeds tolerance " << ctx.opts.pohozaev_tol << " at mu = " << ctx.mu;
    throw NonConvergentError(os.str());
  }

  GroundState state;
  state.mu = ctx.mu;
  state.profile = std::move(profile);
  state.report = report;
  state.shoot_height = u0;
  state.residuals = res;
  return state;
}

// Bisects until a shot enters the decay funnel.  Near mu_star the funnel
// window around the critical height shrinks towards the floating-point
// spacing (flat-top states hug the zero of g - mu s), so the loop continues
// to machine exhaustion before giving up; the final attempt then fails
// loudly inside finalize().
GroundState bisect_and_finalize(SolveContext& ctx, double lo, double hi) {
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // floating-point exhaustion
    RawOutcome out = ctx.classify(mid);
    if (out.kind == RawKind::Overshoot)
      hi = mid;
    else if (out.kind == RawKind::Undershoot)
      lo = mid;
    else
      return finalize(ctx, mid);
  }
  return finalize(ctx, 0.5 * (lo + hi));
}

}  // namespace

double default_step(const NonlinearitySpec& spec, double mu, double u0) {
  double h = std::min(0.01, 0.1 / std::sqrt(mu)) / std::max(1.0, u0);
  // core curvature scale: sharp nonlinearities need finer steps than the
  // amplitude rule alone provides
  double rate = std::sqrt(mu + std::abs(spec.dg(u0)));
  return std::min(h, 0.015 / rate);
}

double default_r_max(double mu) { return std::log(1e12) / std::sqrt(mu); }

std::pair<RadialProfile, ShootOutcome> integrate_radial(
    const NonlinearitySpec& spec, int dim, double mu, double u0, double r_max,
    double h, const ShootOptions& opts) {
  if (!(mu > 0.0)) throw std::invalid_argument("integrate_radial: mu must be positive");
  if (dim < 2) throw std::invalid_argument("integrate_radial: dim must be >= 2");
  if (!(h > 0.0) || !(r_max > h))
    throw std::invalid_argument("integrate_radial: need 0 < h < r_max");

  Trajectory traj;
  RawOutcome raw = shoot(spec, dim, mu, u0, r_max, h, opts, &traj);

  RadialProfile profile;
  profile.dim = dim;
  profile.r = std::move(traj.r);
  profile.u = std::move(traj.u);
  profile.du = std::move(traj.v);

  ShootOutcome outcome;
  outcome.event_radius = raw.event_radius;
  switch (raw.kind) {
    case RawKind::Overshoot:
      outcome.kind = ShootOutcome::Kind::Overshoot;
      break;
    case RawKind::Undershoot:
      outcome.kind = ShootOutcome::Kind::Undershoot;
      break;
    case RawKind::Decay:
      outcome.kind = ShootOutcome::Kind::Decay;
      break;
    case RawKind::End:
      // No event before r_max: a still-falling trajectory is heading into
      // decay, anything else failed to decay.
      outcome.kind = profile.du.back() < 0.0 ? ShootOutcome::Kind::Decay
                                             : ShootOutcome::Kind::Undershoot;
      break;
  }
  return {std::move(profile), outcome};
}

GroundState ground_state(const NonlinearitySpec& spec, int dim, double mu,
                         const ShootOptions& opts) {
  SolveContext ctx = make_context(spec, dim, mu, opts);
  double lo = ctx.s_G * opts.seed_low;
  HiSearch hi = find_overshoot(ctx, lo);
  if (!hi.is_bracket_top) return finalize(ctx, hi.value);
  return bisect_and_finalize(ctx, lo, hi.value);
}

std::vector<GroundState> multi_start_ground_states(const NonlinearitySpec& spec,
                                                   int dim, double mu, int n_starts,
                                                   const ShootOptions& opts) {
  if (n_starts < 1)
    throw std::invalid_argument("multi_start_ground_states: n_starts must be >= 1");
  SolveContext ctx = make_context(spec, dim, mu, opts);

  double seed_lo = ctx.s_G * opts.seed_low;
  double seed_hi = opts.seed_high * ctx.s_G;
  if (std::isfinite(ctx.band_top))
    seed_hi = std::min(seed_hi, ctx.band_top * (1.0 - 1e-9));
  if (seed_hi <= seed_lo) seed_hi = seed_lo;

  std::vector<GroundState> found;
  std::string first_error;

  for (int k = 0; k < n_starts; ++k) {
    double seed = n_starts == 1
                      ? std::sqrt(seed_lo * seed_hi)
                      : seed_lo * std::pow(seed_hi / seed_lo, k / (n_starts - 1.0));
    try {
      RawOutcome out = ctx.classify(seed);
      if (out.kind == RawKind::Decay) {
        found.push_back(finalize(ctx, seed));
        continue;
      }
      if (out.kind == RawKind::Undershoot) {
        double lo = seed;
        HiSearch hi = find_overshoot(ctx, lo);
        if (!hi.is_bracket_top)
          found.push_back(finalize(ctx, hi.value));
        else
          found.push_back(bisect_and_finalize(ctx, lo, hi.value));
      } else {  // overshoot: walk down to an undershooting height
        double hi = seed;
        double lo = seed / opts.walk_ratio;
        bool finalized = false;
        for (;;) {
          if (lo <= ctx.s_G) {
            lo = ctx.s_G;  // heights at the energy floor always undershoot
            break;
          }
          RawOutcome low = ctx.classify(lo);
          if (low.kind == RawKind::Undershoot) break;
          if (low.kind == RawKind::Decay) {
            found.push_back(finalize(ctx, lo));
            finalized = true;
            break;
          }
          hi = lo;
          lo /= opts.walk_ratio;
        }
        if (!finalized) found.push_back(bisect_and_finalize(ctx, lo, hi));
      }
    } catch (const SolverError& e) {
      if (first_error.empty()) first_error = e.what();
    }
  }

  if (found.empty())
    throw NoBracketError(first_error.empty()
                             ? "multi_start_ground_states: every start failed"
                             : "multi_start_ground_states: every start failed: " + first_error);

  // Deduplicate by shoot height.
  std::sort(found.begin(), found.end(), [](const GroundState& a, const GroundState& b) {
    return a.shoot_height < b.shoot_height;
  });
  std::vector<GroundState> unique;
  for (auto& st : found) {
    if (!unique.empty() &&
        std::abs(st.shoot_height - unique.back().shoot_height) <
            1e-6 * std::abs(unique.back().shoot_height))
      continue;
    unique.push_back(std::move(st));
  }

  // Keep the minimal-action layer.
  double a_min = kInf;
  for (const auto& st : unique) a_min = std::min(a_min, st.report.action);
  std::vector<GroundState> kept;
  for (auto& st : unique) {
    if (st.report.action <= a_min * (1.0 + opts.action_tol)) kept.push_back(std::move(st));
  }

  std::sort(kept.begin(), kept.end(), [](const GroundState& a, const GroundState& b) {
    if (a.report.mass != b.report.mass) return a.report.mass < b.report.mass;
    return a.shoot_height < b.shoot_height;
  });
  return kept;
}

}  // namespace nls
