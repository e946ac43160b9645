#include "nls/mass_frequency.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "nls/errors.hpp"
#include "nls/parallel.hpp"
#include "nls/scaling_oracle.hpp"

namespace nls {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double beta_from_p0(const FrequencyCurve& curve) {
  RegimeReport report = classify(curve.spec, curve.dim);
  return beta_exponent(report.p0, curve.dim);
}

FrequencyCurve::Sample sample_from_states(double mu,
                                          const std::vector<GroundState>& states) {
  FrequencyCurve::Sample s;
  s.mu = mu;
  s.n_states = static_cast<int>(states.size());
  double a = kInf, c_lo = kInf, c_hi = -kInf;
  for (const auto& st : states) {
    a = std::min(a, st.report.grad_sq / st.profile.dim);
    c_lo = std::min(c_lo, st.report.mass);
    c_hi = std::max(c_hi, st.report.mass);
  }
  s.a = a;
  s.c_minus = c_lo;
  s.c_plus = c_hi;
  return s;
}

// Least-squares slope of y against x.
double lsq_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double xm = 0, ym = 0;
  for (std::size_t i = 0; i < n; ++i) {
    xm += x[i];
    ym += y[i];
  }
  xm /= n;
  ym /= n;
  double num = 0, den = 0;
  for (std::size_t i = 0; i < n; ++i) {
    num += (x[i] - xm) * (y[i] - ym);
    den += (x[i] - xm) * (x[i] - xm);
  }
  return num / den;
}

// Cache of fresh solves keyed by frequency, so the c_minus and c_plus root
// passes share work.
struct SolveCache {
  const FrequencyCurve& curve;
  const ShootOptions& opts;
  std::map<double, std::vector<GroundState>> solved;

  const std::vector<GroundState>& at(double mu) {
    auto it = solved.find(mu);
    if (it == solved.end()) {
      it = solved
               .emplace(mu, multi_start_ground_states(curve.spec, curve.dim, mu,
                                                      curve.n_starts, opts))
               .first;
    }
    return it->second;
  }
};

}  // namespace

std::vector<double> default_mu_grid(const NonlinearitySpec& spec, int count) {
  if (count < 1) throw std::invalid_argument("default_mu_grid: count must be >= 1");
  double star = mu_star(spec);
  double lo, hi;
  if (std::isfinite(star)) {
    lo = std::max(1e-3, 1e-3 * star);
    hi = 0.98 * star;
  } else {
    lo = 1e-3;
    hi = 1e2;
  }
  std::vector<double> grid(count);
  if (count == 1) {
    grid[0] = std::sqrt(lo * hi);
    return grid;
  }
  const double llo = std::log(lo), lhi = std::log(hi);
  for (int i = 0; i < count; ++i)
    grid[i] = std::exp(llo + (lhi - llo) * i / (count - 1.0));
  return grid;
}

FrequencyCurve scan(const NonlinearitySpec& spec, int dim,
                    const std::vector<double>& mu_grid, int n_starts,
                    const ShootOptions& opts) {
  if (mu_grid.empty()) throw std::invalid_argument("scan: empty frequency grid");
  double star = mu_star(spec);
  for (std::size_t i = 0; i < mu_grid.size(); ++i) {
    if (!(mu_grid[i] > 0.0) || !(mu_grid[i] < star))
      throw std::invalid_argument("scan: grid must lie inside (0, mu_star)");
    if (i > 0 && !(mu_grid[i] > mu_grid[i - 1]))
      throw std::invalid_argument("scan: grid must be strictly increasing");
  }

  std::vector<std::optional<FrequencyCurve::Sample>> slots(mu_grid.size());
  std::vector<std::string> errors(mu_grid.size());
  parallel_for(mu_grid.size(), [&](std::size_t i) {
    try {
      auto states = multi_start_ground_states(spec, dim, mu_grid[i], n_starts, opts);
      slots[i] = sample_from_states(mu_grid[i], states);
    } catch (const SolverError& e) {
      std::ostringstream os;
      os << "mu = " << mu_grid[i] << ": " << e.what();
      errors[i] = os.str();
    }
  });

  FrequencyCurve curve;
  curve.spec = spec;
  curve.dim = dim;
  curve.n_starts = n_starts;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (slots[i])
      curve.samples.push_back(*slots[i]);
    else
      curve.gaps.push_back(errors[i]);
  }
  if (curve.samples.empty())
    throw EmptyCurveError("scan: every grid frequency failed; first: " +
                          (curve.gaps.empty() ? std::string("?") : curve.gaps.front()));

  for (std::size_t i = 0; i < curve.samples.size(); ++i) {
    const auto& s = curve.samples[i];
    if (!(s.a > 0.0) || !(s.c_minus > 0.0) || !(s.c_minus <= s.c_plus))
      throw SolverError("scan: invalid sample levels");
    if (i > 0 && !(s.a > curve.samples[i - 1].a))
      throw SolverError("scan: least-energy level failed to increase with mu");
  }
  return curve;
}

std::vector<std::pair<double, double>> b_m_curve(const FrequencyCurve& curve, double m) {
  std::vector<std::pair<double, double>> out;
  out.reserve(curve.samples.size());
  for (const auto& s : curve.samples) out.emplace_back(s.mu, s.a - m * s.mu);
  return out;
}

CStarResult c_star(const FrequencyCurve& curve, const ShootOptions& opts) {
  if (curve.samples.empty()) throw std::invalid_argument("c_star: empty curve");
  std::size_t best = 0;
  for (std::size_t i = 1; i < curve.samples.size(); ++i)
    if (curve.samples[i].c_minus < curve.samples[best].c_minus) best = i;

  CStarResult result;
  result.c_star = curve.samples[best].c_minus;
  result.mu = curve.samples[best].mu;
  if (best == 0 || best + 1 == curve.samples.size()) {
    result.at_boundary = true;
    return result;
  }

  SolveCache cache{curve, opts, {}};
  auto c_minus_at = [&](double mu) { return cache.at(mu).front().report.mass; };

  // Golden-section refinement of the interior minimum.
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = curve.samples[best - 1].mu;
  double b = curve.samples[best + 1].mu;
  double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
  double f1 = c_minus_at(x1), f2 = c_minus_at(x2);
  auto consider = [&](double mu, double c) {
    if (c < result.c_star) {
      result.c_star = c;
      result.mu = mu;
    }
  };
  consider(x1, f1);
  consider(x2, f2);
  for (int it = 0; it < 80 && (b - a) > 1e-3 * b; ++it) {
    if (f1 > f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = c_minus_at(x2);
      consider(x2, f2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = c_minus_at(x1);
      consider(x1, f1);
    }
  }
  return result;
}

std::vector<NormalizedSolution> find_normalized(const FrequencyCurve& curve,
                                                double m, double tol,
                                                const ShootOptions& opts) {
  if (!(m > 0.0)) throw std::invalid_argument("find_normalized: mass must be positive");
  if (curve.samples.size() < 2)
    throw std::invalid_argument("find_normalized: curve too coarse to bracket roots");

  SolveCache cache{curve, opts, {}};
  std::vector<NormalizedSolution> solutions;
  std::vector<std::string> diagnostics;

  // target = false: c_minus (front of mass-sorted states); true: c_plus.
  auto refine = [&](double mu_lo, double mu_hi, double f_lo, bool use_plus,
                    NormalizedSolution::Branch branch) {
    double lo = mu_lo, hi = mu_hi;
    const bool lo_positive = f_lo > 0.0;
    for (int it = 0; it < 200; ++it) {
      double mid = 0.5 * (lo + hi);
      const auto& states = cache.at(mid);
      const GroundState& pick = use_plus ? states.back() : states.front();
      double f = pick.report.mass - m;
      if (std::abs(f) <= tol * m && (hi - lo) <= 1e-4 * mid) {
        NormalizedSolution sol;
        sol.mu = mid;
        sol.state = pick;
        sol.mass_target = m;
        sol.mass_error = std::abs(f) / m;
        sol.j_m = pick.report.action - mid * m;
        sol.classification = branch;
        solutions.push_back(std::move(sol));
        return;
      }
      if ((f > 0.0) == lo_positive)
        lo = mid;
      else
        hi = mid;
      if (!(lo < hi)) break;  // floating-point exhaustion
    }
    std::ostringstream os;
    os << "root in (" << mu_lo << ", " << mu_hi << ") did not meet the mass tolerance";
    diagnostics.push_back(os.str());
  };

  const auto& s = curve.samples;
  bool distinct_extremes = false;
  for (const auto& smp : s)
    if (smp.c_plus > smp.c_minus * (1.0 + 1e-9)) distinct_extremes = true;

  for (int pass = 0; pass < (distinct_extremes ? 2 : 1); ++pass) {
    const bool use_plus = pass == 1;
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
      double f0 = (use_plus ? s[i].c_plus : s[i].c_minus) - m;
      double f1 = (use_plus ? s[i + 1].c_plus : s[i + 1].c_minus) - m;
      if (f0 == 0.0) f0 = -std::numeric_limits<double>::min();
      if (!(f0 > 0.0) == !(f1 > 0.0)) continue;
      // Falling branch: b_m'(mu) = c - m changes + -> -, a local maximum.
      auto branch = f0 > 0.0 ? NormalizedSolution::Branch::BmLocalMax
                             : NormalizedSolution::Branch::BmLocalMin;
      try {
        refine(s[i].mu, s[i + 1].mu, f0, use_plus, branch);
      } catch (const SolverError& e) {
        std::ostringstream os;
        os << "root in (" << s[i].mu << ", " << s[i + 1].mu << ") aborted: " << e.what();
        diagnostics.push_back(os.str());
      }
    }
  }

  std::sort(solutions.begin(), solutions.end(),
            [](const NormalizedSolution& a, const NormalizedSolution& b) {
              return a.mu < b.mu;
            });
  std::vector<NormalizedSolution> unique;
  for (auto& sol : solutions) {
    if (!unique.empty() && std::abs(sol.mu - unique.back().mu) <= 1e-8 * unique.back().mu)
      continue;
    unique.push_back(std::move(sol));
  }

  if (unique.empty()) {
    std::ostringstream os;
    os << "find_normalized: no frequency bracket for mass m = " << m;
    for (const auto& d : diagnostics) os << "; " << d;
    throw NoSolutionError(os.str());
  }
  return unique;
}

DerivativeCheck check_derivative(const NonlinearitySpec& spec, int dim, double mu,
                                 double h, int n_starts, const ShootOptions& opts) {
  if (!(h > 0.0) || !(mu - h > 0.0))
    throw std::invalid_argument("check_derivative: need 0 < h < mu");

  auto level = [&](double m) {
    auto states = multi_start_ground_states(spec, dim, m, n_starts, opts);
    double a = kInf;
    for (const auto& st : states) a = std::min(a, st.report.grad_sq / st.profile.dim);
    return std::make_pair(a, states);
  };

  auto [a0, states0] = level(mu);
  auto [a_plus, sp] = level(mu + h);
  auto [a_minus, sm] = level(mu - h);

  DerivativeCheck check;
  check.fd_plus = (a_plus - a0) / h;
  check.fd_minus = (a0 - a_minus) / h;
  check.fd_central = (a_plus - a_minus) / (2.0 * h);
  check.c_minus_val = states0.front().report.mass;
  check.c_plus_val = states0.back().report.mass;
  check.rel_err = std::max(std::abs(check.fd_plus - check.c_minus_val) / check.c_minus_val,
                           std::abs(check.fd_minus - check.c_plus_val) / check.c_plus_val);
  check.rel_err_central =
      std::max(std::abs(check.fd_central - check.c_minus_val) / check.c_minus_val,
               std::abs(check.fd_central - check.c_plus_val) / check.c_plus_val);
  return check;
}

AsymptoticReport check_asymptotics(const FrequencyCurve& curve,
                                   AsymptoticReport::End end) {
  const auto& s = curve.samples;
  if (s.size() < 4)
    throw InsufficientSamplesError("check_asymptotics: need at least 4 samples");

  std::vector<double> lx, la, lc;
  AsymptoticReport report;
  report.end = end;
  report.n_samples = 4;

  if (end == AsymptoticReport::End::ZeroPlus) {
    if (s[3].mu > 10.0 * s[0].mu)
      throw InsufficientSamplesError(
          "check_asymptotics: fewer than 4 samples within the lowest decade");
    for (int i = 0; i < 4; ++i) {
      lx.push_back(std::log(s[i].mu));
      la.push_back(std::log(s[i].a));
      lc.push_back(std::log(s[i].c_minus));
    }
    report.fitted_action_slope = lsq_slope(lx, la);
    report.fitted_mass_slope = lsq_slope(lx, lc);
    double beta = beta_from_p0(curve);
    report.predicted_mass_slope = beta;
    report.predicted_action_slope = beta + 1.0;
    return report;
  }

  const std::size_t n = s.size();
  if (s[n - 1].mu > 10.0 * s[n - 4].mu)
    throw InsufficientSamplesError(
        "check_asymptotics: fewer than 4 samples within the top decade");
  report.a_increasing = true;
  report.c_increasing = true;
  for (std::size_t i = n - 3; i < n; ++i) {
    if (!(s[i].a > s[i - 1].a)) report.a_increasing = false;
    if (!(s[i].c_minus > s[i - 1].c_minus)) report.c_increasing = false;
  }
  double interior_min = kInf;
  for (std::size_t i = 1; i + 1 < n; ++i)
    interior_min = std::min(interior_min, s[i].c_minus);
  report.c_end_over_interior_min = s[n - 1].c_minus / interior_min;
  report.action_over_mu_trend =
      (s[n - 1].a / s[n - 1].mu) / (s[n - 4].a / s[n - 4].mu);
  return report;
}

double dilation_path_max(const NonlinearitySpec& spec, double mu,
                         const RadialProfile& profile) {
  double best = -kInf;
  for (int k = 50; k <= 200; ++k) {
    const double tau = k / 100.0;
    best = std::max(best, action(spec, mu, dilate(profile, tau)));
  }
  return best;
}

int count_interior_minima(const FrequencyCurve& curve) {
  const auto& s = curve.samples;
  int count = 0;
  for (std::size_t i = 1; i + 1 < s.size(); ++i) {
    if (s[i].c_minus < s[i - 1].c_minus && s[i].c_minus <= s[i + 1].c_minus) ++count;
  }
  return count;
}

}  // namespace nls
