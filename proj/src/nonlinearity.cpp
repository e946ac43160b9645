#include "nls/nonlinearity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "nls/errors.hpp"

namespace nls {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double pow_fast(double s, double p) {
  if (p == 2.0) return s * s;
  if (p == 3.0) return s * s * s;
  if (p == 4.0) {
    double s2 = s * s;
    return s2 * s2;
  }
  if (p == 5.0) {
    double s2 = s * s;
    return s2 * s2 * s;
  }
  if (p == 6.0) {
    double s3 = s * s * s;
    return s3 * s3;
  }
  return std::pow(s, p);
}

std::vector<double> log_grid(double lo, double hi, int count) {
  std::vector<double> grid(count);
  double llo = std::log(lo), lhi = std::log(hi);
  for (int i = 0; i < count; ++i)
    grid[i] = std::exp(llo + (lhi - llo) * i / (count - 1.0));
  return grid;
}

// Golden-section maximization of f on [lo, hi]; returns the best value seen.
template <class F>
double golden_max(F&& f, double lo, double hi, double rel_tol) {
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double x1 = b - phi * (b - a);
  double x2 = a + phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  double best = std::max(f1, f2);
  for (int it = 0; it < 200 && (b - a) > rel_tol * b; ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = f(x1);
    }
    best = std::max(best, std::max(f1, f2));
  }
  return best;
}

}  // namespace

NonlinearitySpec NonlinearitySpec::pure_power(double p) {
  if (!(p > 1.0) || !std::isfinite(p))
    throw std::invalid_argument("pure_power: exponent must satisfy p > 1");
  NonlinearitySpec spec;
  spec.family_ = Family::PurePower;
  spec.power_ = p;
  return spec;
}

NonlinearitySpec NonlinearitySpec::combined_powers(std::vector<PowerTerm> terms) {
  if (terms.empty())
    throw std::invalid_argument("combined_powers: at least one term required");
  for (const auto& t : terms) {
    if (!(t.exponent > 1.0) || !std::isfinite(t.exponent))
      throw std::invalid_argument("combined_powers: exponents must satisfy p > 1");
    if (!std::isfinite(t.coefficient) || t.coefficient == 0.0)
      throw std::invalid_argument("combined_powers: coefficients must be finite and nonzero");
  }
  std::sort(terms.begin(), terms.end(),
            [](const PowerTerm& a, const PowerTerm& b) { return a.exponent < b.exponent; });
  NonlinearitySpec spec;
  spec.family_ = Family::CombinedPowers;
  spec.terms_ = std::move(terms);
  return spec;
}

NonlinearitySpec NonlinearitySpec::cubic_quintic(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b))
    throw std::invalid_argument("cubic_quintic: coefficients must be positive");
  NonlinearitySpec spec;
  spec.family_ = Family::CubicQuintic;
  spec.cubic_ = a;
  spec.quintic_ = b;
  return spec;
}

double NonlinearitySpec::g(double s) const {
  if (s < 0.0) return -s;
  if (s == 0.0) return 0.0;
  switch (family_) {
    case Family::PurePower:
      return pow_fast(s, power_);
    case Family::CombinedPowers: {
      double acc = 0.0;
      for (const auto& t : terms_) acc += t.coefficient * pow_fast(s, t.exponent);
      return acc;
    }
    case Family::CubicQuintic: {
      double s3 = s * s * s;
      return cubic_ * s3 - quintic_ * s3 * s * s;
    }
    case Family::Truncated:
      return s <= cutoff_ ? inner_->g(s) : 0.0;
  }
  return 0.0;
}

double NonlinearitySpec::G(double s) const {
  if (s < 0.0) return -0.5 * s * s;
  if (s == 0.0) return 0.0;
  switch (family_) {
    case Family::PurePower:
      return pow_fast(s, power_ + 1.0) / (power_ + 1.0);
    case Family::CombinedPowers: {
      double acc = 0.0;
      for (const auto& t : terms_)
        acc += t.coefficient * pow_fast(s, t.exponent + 1.0) / (t.exponent + 1.0);
      return acc;
    }
    case Family::CubicQuintic: {
      double s2 = s * s;
      double s4 = s2 * s2;
      return cubic_ * s4 / 4.0 - quintic_ * s4 * s2 / 6.0;
    }
    case Family::Truncated:
      return s <= cutoff_ ? inner_->G(s) : inner_->G(cutoff_);
  }
  return 0.0;
}

double NonlinearitySpec::dg(double s) const {
  if (s < 0.0) return -1.0;
  if (s == 0.0) return 0.0;  // every family has p > 1 at zero
  switch (family_) {
    case Family::PurePower:
      return power_ * pow_fast(s, power_ - 1.0);
    case Family::CombinedPowers: {
      double acc = 0.0;
      for (const auto& t : terms_)
        acc += t.coefficient * t.exponent * pow_fast(s, t.exponent - 1.0);
      return acc;
    }
    case Family::CubicQuintic: {
      double s2 = s * s;
      return 3.0 * cubic_ * s2 - 5.0 * quintic_ * s2 * s2;
    }
    case Family::Truncated:
      return s <= cutoff_ ? inner_->dg(s) : 0.0;
  }
  return 0.0;
}

double NonlinearitySpec::d2g(double s) const {
  if (s <= 0.0) return 0.0;
  switch (family_) {
    case Family::PurePower:
      return power_ * (power_ - 1.0) * pow_fast(s, power_ - 2.0);
    case Family::CombinedPowers: {
      double acc = 0.0;
      for (const auto& t : terms_)
        acc += t.coefficient * t.exponent * (t.exponent - 1.0) *
               pow_fast(s, t.exponent - 2.0);
      return acc;
    }
    case Family::CubicQuintic:
      return 6.0 * cubic_ * s - 20.0 * quintic_ * s * s * s;
    case Family::Truncated:
      return s <= cutoff_ ? inner_->d2g(s) : 0.0;
  }
  return 0.0;
}

std::string NonlinearitySpec::describe() const {
  std::ostringstream os;
  switch (family_) {
    case Family::PurePower:
      os << "power:p=" << power_;
      break;
    case Family::CombinedPowers: {
      os << "combined:";
      bool first = true;
      for (const auto& t : terms_) {
        if (!first || t.coefficient < 0) os << (t.coefficient < 0 ? "-" : "+");
        os << std::abs(t.coefficient) << "*s^" << t.exponent;
        first = false;
      }
      break;
    }
    case Family::CubicQuintic:
      os << "cubic-quintic:a=" << cubic_ << ",b=" << quintic_;
      break;
    case Family::Truncated:
      os << inner_->describe() << " truncated at s1=" << cutoff_;
      break;
  }
  return os.str();
}

double mu_star(const NonlinearitySpec& spec) {
  switch (spec.family()) {
    case NonlinearitySpec::Family::PurePower:
      return kInf;
    case NonlinearitySpec::Family::CubicQuintic:
      // maximize a s^2/2 - b s^4/3 over x = s^2: x* = 3a/(4b)
      return 3.0 * spec.cubic_coefficient() * spec.cubic_coefficient() /
             (16.0 * spec.quintic_coefficient());
    default:
      return mu_star_numeric(spec);
  }
}

double mu_star_numeric(const NonlinearitySpec& spec) {
  auto objective = [&spec](double s) { return 2.0 * spec.G(s) / (s * s); };

  const auto grid = log_grid(1e-6, 1e6, 600);
  std::vector<double> value(grid.size());
  double best = -kInf;
  std::size_t best_i = 0;
  double interior_max = -kInf;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    value[i] = objective(grid[i]);
    if (value[i] > best) {
      best = value[i];
      best_i = i;
    }
    if (grid[i] < 1e5 && value[i] > interior_max) interior_max = value[i];
  }

  // No finite certificate of unboundedness exists.  Declare +inf when the
  // maximum sits in the top decade, still rises at the upper grid end, and
  // either dominates the interior maximum by 10x or the whole top decade is
  // monotone increasing.
  if (grid[best_i] >= 1e5 && value.back() > value[value.size() - 2]) {
    bool dominates = interior_max <= 0.0 || best > 10.0 * interior_max;
    bool monotone_top = true;
    for (std::size_t i = 1; i < grid.size(); ++i) {
      if (grid[i] >= 1e5 && value[i] <= value[i - 1]) {
        monotone_top = false;
        break;
      }
    }
    if (dominates || (best_i == grid.size() - 1 && monotone_top)) return kInf;
  }

  if (!(best > 0.0))
    throw NonConvergentError(
        "mu_star_numeric: objective 2G(s)/s^2 has no positive maximum; "
        "the nonlinearity has no height with positive potential energy");

  double lo = best_i == 0 ? grid.front() : grid[best_i - 1];
  double hi = best_i + 1 < grid.size() ? grid[best_i + 1] : grid.back();
  double refined = golden_max(objective, lo, hi, 1e-10);
  return std::max(best, refined);
}

NonlinearitySpec truncate(const NonlinearitySpec& spec) {
  if (spec.family() == NonlinearitySpec::Family::Truncated)
    throw std::invalid_argument("truncate: family is already truncated");

  // s0: smallest height with positive potential energy.
  const auto grid = log_grid(1e-8, 1e8, 1600);
  std::size_t i0 = grid.size();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (spec.G(grid[i]) > 0.0) {
      i0 = i;
      break;
    }
  }
  if (i0 == grid.size())
    throw NoZeroFoundError("truncate: G(s) <= 0 on the scanned range");

  // Smallest zero of g above s0: walk the geometric grid for a sign change,
  // then bisect.
  bool seen_positive = false;
  double lo = 0, hi = 0;
  for (std::size_t i = i0; i < grid.size(); ++i) {
    double gs = spec.g(grid[i]);
    if (gs > 0.0) {
      seen_positive = true;
      lo = grid[i];
    } else if (seen_positive) {
      hi = grid[i];
      break;
    }
  }
  if (hi == 0.0)
    throw NoZeroFoundError("truncate: g stays positive above s0 on the scanned range");

  for (int it = 0; it < 200 && (hi - lo) > 1e-15 * hi; ++it) {
    double mid = 0.5 * (lo + hi);
    if (spec.g(mid) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  double s1 = 0.5 * (lo + hi);

  NonlinearitySpec out;
  out.family_ = NonlinearitySpec::Family::Truncated;
  out.inner_ = std::make_shared<NonlinearitySpec>(spec);
  out.cutoff_ = s1;
  return out;
}

double sobolev_critical_exponent(int dim) {
  if (dim < 2) throw std::invalid_argument("dimension must be >= 2");
  if (dim == 2) return kInf;
  return 2.0 * dim / (dim - 2.0);
}

double mass_critical_exponent(int dim) {
  if (dim < 2) throw std::invalid_argument("dimension must be >= 2");
  return 1.0 + 4.0 / dim;
}

RegimeReport classify(const NonlinearitySpec& spec, int dim) {
  if (dim < 2) throw std::invalid_argument("classify: dimension must be >= 2");

  RegimeReport report;
  using Family = NonlinearitySpec::Family;
  using Tail = RegimeReport::Tail;

  switch (spec.family()) {
    case Family::PurePower:
      report.p0 = spec.power();
      report.p0_coefficient = 1.0;
      report.tail = Tail::PowerGrowth;
      report.p_infinity = spec.power();
      break;
    case Family::CombinedPowers: {
      const auto& terms = spec.terms();  // sorted by exponent
      report.p0 = terms.front().exponent;
      report.p0_coefficient = terms.front().coefficient;
      const auto& top = terms.back();
      if (top.coefficient > 0) {
        report.tail = Tail::PowerGrowth;
        report.p_infinity = top.exponent;
      } else {
        report.tail = Tail::NonSuperlinear;
      }
      break;
    }
    case Family::CubicQuintic:
      report.p0 = 3.0;
      report.p0_coefficient = spec.cubic_coefficient();
      report.tail = Tail::NonSuperlinear;
      break;
    case Family::Truncated: {
      RegimeReport inner = classify(spec.inner(), dim);
      report.p0 = inner.p0;
      report.p0_coefficient = inner.p0_coefficient;
      report.tail = Tail::NonSuperlinear;  // g vanishes above the cutoff
      break;
    }
  }

  if (!(report.p0 > 1.0))
    throw UnsupportedRegimeError("classify: leading exponent at zero must exceed 1");

  const double p_mass = mass_critical_exponent(dim);
  const double p_sobolev = sobolev_critical_exponent(dim);
  report.p0_mass_supercritical = report.p0 > p_mass;
  report.p0_sobolev_subcritical = report.p0 < p_sobolev - 1.0;
  report.mu_star_finite = std::isfinite(mu_star(spec));

  using Regime = RegimeReport::Regime;
  if (report.tail == Tail::PowerGrowth && report.p_infinity > p_mass &&
      report.p_infinity < p_sobolev - 1.0) {
    report.regime = Regime::SupercriticalAtInfinity;
  } else if (report.mu_star_finite ||
             (report.tail == Tail::PowerGrowth && report.p_infinity < p_mass)) {
    report.regime = Regime::SubcriticalAtInfinity;
  } else {
    report.regime = Regime::Indeterminate;
  }
  return report;
}

}  // namespace nls
