#include "nls/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <sstream>

#include "nls/errors.hpp"
#include "nls/formats.hpp"
#include "nls/mass_frequency.hpp"
#include "nls/nonlinearity.hpp"
#include "nls/scaling_oracle.hpp"
#include "nls/shooting.hpp"

namespace nls {

namespace {

std::vector<double> log_spaced(double lo, double hi, int count) {
  std::vector<double> grid(count);
  const double llo = std::log(lo), lhi = std::log(hi);
  for (int i = 0; i < count; ++i)
    grid[i] = std::exp(llo + (lhi - llo) * i / (count - 1.0));
  return grid;
}

struct Context {
  ShootOptions opts;
  std::vector<std::pair<std::string, double>> residual_log;
  std::optional<FrequencyCurve> cq_curve;
  std::string cq_curve_error;
  std::optional<CStarResult> cq_cstar;

  void log_state(const std::string& label, const GroundState& state) {
    residual_log.emplace_back(label, state.residuals.pohozaev_rel);
  }

  GroundState solve(const NonlinearitySpec& spec, int dim, double mu,
                    const std::string& label) {
    GroundState st = ground_state(spec, dim, mu, opts);
    log_state(label, st);
    return st;
  }

  const FrequencyCurve& cubic_quintic_curve() {
    if (!cq_curve && cq_curve_error.empty()) {
      try {
        auto spec = NonlinearitySpec::cubic_quintic(1.0, 1.0);
        cq_curve = scan(spec, 3, log_spaced(0.002, 0.183, 32), 8, opts);
      } catch (const std::exception& e) {
        cq_curve_error = e.what();
      }
    }
    if (!cq_curve) throw SolverError("cubic-quintic scan failed: " + cq_curve_error);
    return *cq_curve;
  }

  const CStarResult& cubic_quintic_cstar() {
    if (!cq_cstar) cq_cstar = c_star(cubic_quintic_curve(), opts);
    return *cq_cstar;
  }
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

// --- criteria -------------------------------------------------------------

CriterionResult check_mu_star(Context&) {
  auto cq = NonlinearitySpec::cubic_quintic(1.0, 1.0);
  const double closed = mu_star(cq);
  const double numeric = mu_star_numeric(cq);
  const double expected = 0.1875;
  bool ok = closed == expected && std::abs(numeric - expected) <= 1e-10;
  std::ostringstream os;
  os << "closed form " << format_double(closed) << ", numeric err "
     << fmt(std::abs(numeric - expected));
  return {"mu-star", ok, os.str()};
}

CriterionResult check_scaling(Context& ctx) {
  auto spec = NonlinearitySpec::pure_power(3.0);
  GroundState base = ctx.solve(spec, 3, 1.0, "power3 mu=1");
  const double beta = beta_exponent(3.0, 3);  // -1/2
  double worst = 0.0;
  for (double mu : {0.25, 4.0}) {
    GroundState st = ctx.solve(spec, 3, mu, "power3 mu=" + fmt(mu));
    double mass_ratio = st.report.mass / base.report.mass;
    double action_ratio = st.report.action / base.report.action;
    worst = std::max(worst, std::abs(mass_ratio / std::pow(mu, beta) - 1.0));
    worst = std::max(worst, std::abs(action_ratio / std::pow(mu, beta + 1.0) - 1.0));
  }
  std::ostringstream os;
  os << "worst relative deviation from mu^beta / mu^(beta+1): " << fmt(worst);
  return {"scaling", worst <= 1e-3, os.str()};
}

CriterionResult check_derivative_law(Context& ctx) {
  // Both test points sit in a uniqueness regime (c_minus = c_plus), so the
  // derivative exists there and the central quotient is the sharper probe;
  // the one-sided quotients are reported alongside.
  double worst = 0.0;
  std::ostringstream os;
  {
    auto spec = NonlinearitySpec::pure_power(3.0);
    DerivativeCheck d = check_derivative(spec, 3, 1.0, 1e-3, 8, ctx.opts);
    worst = std::max(worst, d.rel_err_central);
    os << "power3 central/one-sided rel err " << fmt(d.rel_err_central) << "/"
       << fmt(d.rel_err);
  }
  {
    auto spec = NonlinearitySpec::cubic_quintic(1.0, 1.0);
    DerivativeCheck d = check_derivative(spec, 3, 0.1, 1e-3, 8, ctx.opts);
    worst = std::max(worst, d.rel_err_central);
    os << ", cubic-quintic central/one-sided rel err " << fmt(d.rel_err_central)
       << "/" << fmt(d.rel_err);
  }
  return {"derivative", worst <= 1e-2, os.str()};
}

CriterionResult check_mass_curve(Context& ctx) {
  const FrequencyCurve& curve = ctx.cubic_quintic_curve();
  const auto& s = curve.samples;
  std::ostringstream os;
  // The last grid frequencies sit so close to mu_star that the flat-top
  // critical height falls inside the floating-point spacing; those points
  // fail loudly and are recorded as gaps, never fabricated.  The divergence
  // check runs on the realized end samples.
  if (s.size() < 30) {
    os << "only " << s.size() << "/32 samples";
    if (!curve.gaps.empty()) os << " (first gap: " << curve.gaps.front() << ")";
    return {"mass-curve", false, os.str()};
  }
  double interior_min = s[1].c_minus;
  for (std::size_t i = 1; i + 1 < s.size(); ++i)
    interior_min = std::min(interior_min, s[i].c_minus);
  const double lo_ratio = s.front().c_minus / interior_min;
  const double hi_ratio = s.back().c_minus / interior_min;
  bool increasing = true;
  for (std::size_t i = 1; i < s.size(); ++i)
    if (!(s[i].a > s[i - 1].a)) increasing = false;
  os << s.size() << "/32 samples (top gaps hug mu_star); "
     << "c(mu_min)/c_interior_min = " << fmt(lo_ratio) << " (need > 3), "
     << "c(mu_top)/c_interior_min = " << fmt(hi_ratio) << " (need > 3), "
     << "a increasing: " << (increasing ? "yes" : "no")
     << "; interior minima of c: " << count_interior_minima(curve);
  return {"mass-curve", lo_ratio > 3.0 && hi_ratio > 3.0 && increasing, os.str()};
}

CriterionResult check_multiplicity(Context& ctx) {
  const FrequencyCurve& curve = ctx.cubic_quintic_curve();
  const CStarResult& cs = ctx.cubic_quintic_cstar();
  std::ostringstream os;
  os << "c* = " << fmt(cs.c_star) << " at mu = " << fmt(cs.mu);

  auto solutions = find_normalized(curve, 2.0 * cs.c_star, 1e-3, ctx.opts);
  for (const auto& sol : solutions) ctx.log_state("multiplicity root", sol.state);
  if (solutions.size() != 2) {
    os << "; expected 2 solutions at m = 2c*, got " << solutions.size();
    return {"multiplicity", false, os.str()};
  }
  const NormalizedSolution* max_branch = nullptr;
  const NormalizedSolution* min_branch = nullptr;
  for (const auto& sol : solutions) {
    if (sol.classification == NormalizedSolution::Branch::BmLocalMax) max_branch = &sol;
    if (sol.classification == NormalizedSolution::Branch::BmLocalMin) min_branch = &sol;
  }
  bool ok = max_branch && min_branch && solutions[0].mass_error <= 1e-3 &&
            solutions[1].mass_error <= 1e-3;
  if (ok) {
    ok = max_branch->j_m > 0.0 && max_branch->j_m > min_branch->j_m;
    os << "; J(max branch) = " << fmt(max_branch->j_m)
       << " > J(min branch) = " << fmt(min_branch->j_m);
  } else {
    os << "; branch classification or mass tolerance failed";
  }

  bool none_below = false;
  try {
    find_normalized(curve, 0.5 * cs.c_star, 1e-3, ctx.opts);
    os << "; m = c*/2 unexpectedly produced solutions";
  } catch (const NoSolutionError&) {
    none_below = true;
    os << "; m = c*/2 correctly has none";
  }
  return {"multiplicity", ok && none_below, os.str()};
}

CriterionResult check_uniqueness(Context& ctx) {
  auto spec = NonlinearitySpec::pure_power(3.0);
  FrequencyCurve curve = scan(spec, 3, default_mu_grid(spec, 32), 8, ctx.opts);
  GroundState base = ctx.solve(spec, 3, 1.0, "power3 mu=1 (uniqueness)");
  const double c0 = base.report.mass;
  const double beta = beta_exponent(3.0, 3);
  const double mu_pred = std::pow(1.0 / c0, 1.0 / beta);

  auto solutions = find_normalized(curve, 1.0, 1e-3, ctx.opts);
  for (const auto& sol : solutions) ctx.log_state("uniqueness root", sol.state);
  std::ostringstream os;
  os << solutions.size() << " solution(s)";
  if (solutions.size() != 1) return {"uniqueness", false, os.str()};
  double mu_err = std::abs(solutions[0].mu - mu_pred) / mu_pred;
  os << ", mu = " << fmt(solutions[0].mu) << " vs inverted " << fmt(mu_pred)
     << " (rel err " << fmt(mu_err) << "), J = " << fmt(solutions[0].j_m);
  bool ok = mu_err <= 1e-3 && solutions[0].j_m > 0.0;
  return {"uniqueness", ok, os.str()};
}

CriterionResult check_asymptotic_slope(Context& ctx) {
  const FrequencyCurve& curve = ctx.cubic_quintic_curve();
  AsymptoticReport rep = check_asymptotics(curve, AsymptoticReport::End::ZeroPlus);
  double err = std::abs(rep.fitted_mass_slope - rep.predicted_mass_slope);
  std::ostringstream os;
  os << "fitted c slope " << fmt(rep.fitted_mass_slope) << " vs predicted "
     << fmt(rep.predicted_mass_slope);
  return {"asymptotics", err <= 0.05, os.str()};
}

CriterionResult check_oracle(Context& ctx) {
  double worst_point = 0.0, worst_integral = 0.0;
  for (double p : {2.5, 3.0, 3.5}) {
    auto spec = NonlinearitySpec::pure_power(p);
    GroundState base = ctx.solve(spec, 3, 1.0, "oracle base p=" + fmt(p));
    const double beta = beta_exponent(p, 3);
    for (double mu : {0.25, 4.0}) {
      GroundState fresh = ctx.solve(spec, 3, mu, "oracle p=" + fmt(p) + " mu=" + fmt(mu));
      RadialProfile predicted = rescale_ground_state(spec, base, p, mu);

      double mass_pred = base.report.mass * std::pow(mu, beta);
      double action_pred = base.report.action * std::pow(mu, beta + 1.0);
      worst_integral = std::max(worst_integral,
                                std::abs(fresh.report.mass / mass_pred - 1.0));
      worst_integral = std::max(worst_integral,
                                std::abs(fresh.report.action / action_pred - 1.0));

      const double amplitude = fresh.profile.u.front();
      const std::size_t stride = std::max<std::size_t>(1, fresh.profile.size() / 2000);
      for (std::size_t i = 0; i < fresh.profile.size(); i += stride) {
        double diff = fresh.profile.u[i] - profile_value(predicted, fresh.profile.r[i]);
        worst_point = std::max(worst_point, std::abs(diff) / amplitude);
      }
    }
  }
  std::ostringstream os;
  os << "worst pointwise " << fmt(worst_point) << ", worst integral "
     << fmt(worst_integral);
  return {"oracle", worst_point <= 1e-3 && worst_integral <= 1e-3, os.str()};
}

CriterionResult check_determinism(Context& ctx) {
  auto spec = NonlinearitySpec::cubic_quintic(1.0, 1.0);
  auto grid = log_spaced(0.01, 0.18, 8);
  auto render = [&] {
    FrequencyCurve curve = scan(spec, 3, grid, 4, ctx.opts);
    std::ostringstream ss;
    write_curve_csv(ss, curve, 5.0);
    return ss.str();
  };
  std::string first = render();
  std::string second = render();
  bool ok = !first.empty() && first == second;
  std::ostringstream os;
  os << "two scans, " << first.size() << " bytes each, "
     << (ok ? "byte-identical" : "MISMATCH");
  return {"determinism", ok, os.str()};
}

CriterionResult check_pohozaev(Context& ctx) {
  // The solver refuses to return any state beyond the certificate, so this
  // re-checks the recorded residuals and adds a fresh batch when the log is
  // empty (filtered runs).
  if (ctx.residual_log.empty()) {
    auto cq = NonlinearitySpec::cubic_quintic(1.0, 1.0);
    auto p3 = NonlinearitySpec::pure_power(3.0);
    for (double mu : {0.05, 0.15}) ctx.solve(cq, 3, mu, "pohozaev batch cq mu=" + fmt(mu));
    for (double mu : {0.5, 1.0}) ctx.solve(p3, 3, mu, "pohozaev batch p3 mu=" + fmt(mu));
  }
  double worst = 0.0;
  std::string worst_label;
  for (const auto& [label, res] : ctx.residual_log) {
    if (res > worst) {
      worst = res;
      worst_label = label;
    }
  }
  std::ostringstream os;
  os << ctx.residual_log.size() << " states, worst |P|/grad_sq = " << fmt(worst)
     << (worst_label.empty() ? "" : " (" + worst_label + ")");
  return {"pohozaev", worst <= 1e-6, os.str()};
}

}  // namespace

const std::vector<std::string>& acceptance_criteria() {
  static const std::vector<std::string> names = {
      "mu-star",   "pohozaev",     "scaling",     "derivative", "mass-curve",
      "multiplicity", "uniqueness", "asymptotics", "oracle",    "determinism"};
  return names;
}

std::vector<CriterionResult> run_acceptance(const std::string& filter) {
  using Check = std::function<CriterionResult(Context&)>;
  // "pohozaev" runs last so it sees every state the other criteria produced;
  // results are reported in the canonical order.
  const std::vector<std::pair<std::string, Check>> checks = {
      {"mu-star", check_mu_star},
      {"scaling", check_scaling},
      {"derivative", check_derivative_law},
      {"mass-curve", check_mass_curve},
      {"multiplicity", check_multiplicity},
      {"uniqueness", check_uniqueness},
      {"asymptotics", check_asymptotic_slope},
      {"oracle", check_oracle},
      {"determinism", check_determinism},
      {"pohozaev", check_pohozaev},
  };

  Context ctx;
  std::vector<CriterionResult> results;
  for (const auto& [name, check] : checks) {
    if (!filter.empty() && name.find(filter) == std::string::npos) continue;
    try {
      results.push_back(check(ctx));
    } catch (const std::exception& e) {
      results.push_back({name, false, std::string("exception: ") + e.what()});
    }
  }

  std::sort(results.begin(), results.end(),
            [](const CriterionResult& a, const CriterionResult& b) {
              const auto& order = acceptance_criteria();
              auto ia = std::find(order.begin(), order.end(), a.name);
              auto ib = std::find(order.begin(), order.end(), b.name);
              return ia < ib;
            });
  return results;
}

}  // namespace nls
