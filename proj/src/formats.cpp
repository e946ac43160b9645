#include "nls/formats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

namespace nls {

namespace {

std::string json_number_or_null(std::optional<double> v) {
  return v ? format_double(*v) : std::string("null");
}

struct Series {
  std::string label;
  std::string color;
  std::vector<double> x, y;
};

void svg_panel(std::ostream& os, double x0, double y0, double width, double height,
               const std::string& x_label, const std::string& y_label,
               const std::vector<Series>& series,
               std::optional<double> hline = std::nullopt) {
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& s : series) {
    for (double v : s.x) {
      xmin = std::min(xmin, v);
      xmax = std::max(xmax, v);
    }
    for (double v : s.y) {
      ymin = std::min(ymin, v);
      ymax = std::max(ymax, v);
    }
  }
  if (hline) {
    ymin = std::min(ymin, *hline);
    ymax = std::max(ymax, *hline);
  }
  if (!(xmax > xmin)) xmax = xmin + 1.0;
  if (!(ymax > ymin)) ymax = ymin + 1.0;
  const double pad_y = 0.05 * (ymax - ymin);
  ymin -= pad_y;
  ymax += pad_y;

  const double left = x0 + 70, right = x0 + width - 15;
  const double top = y0 + 15, bottom = y0 + height - 45;
  auto sx = [&](double v) { return left + (v - xmin) / (xmax - xmin) * (right - left); };
  auto sy = [&](double v) { return bottom - (v - ymin) / (ymax - ymin) * (bottom - top); };

  os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << right - left
     << "\" height=\"" << bottom - top
     << "\" fill=\"none\" stroke=\"#444\" stroke-width=\"1\"/>\n";

  char buf[64];
  for (int i = 0; i <= 4; ++i) {
    double xv = xmin + (xmax - xmin) * i / 4.0;
    double yv = ymin + (ymax - ymin) * i / 4.0;
    std::snprintf(buf, sizeof buf, "%.3g", xv);
    os << "<line x1=\"" << sx(xv) << "\" y1=\"" << bottom << "\" x2=\"" << sx(xv)
       << "\" y2=\"" << bottom + 5 << "\" stroke=\"#444\"/>\n"
       << "<text x=\"" << sx(xv) << "\" y=\"" << bottom + 18
       << "\" font-size=\"11\" text-anchor=\"middle\">" << buf << "</text>\n";
    std::snprintf(buf, sizeof buf, "%.3g", yv);
    os << "<line x1=\"" << left - 5 << "\" y1=\"" << sy(yv) << "\" x2=\"" << left
       << "\" y2=\"" << sy(yv) << "\" stroke=\"#444\"/>\n"
       << "<text x=\"" << left - 8 << "\" y=\"" << sy(yv) + 4
       << "\" font-size=\"11\" text-anchor=\"end\">" << buf << "</text>\n";
  }
  os << "<text x=\"" << 0.5 * (left + right) << "\" y=\"" << bottom + 34
     << "\" font-size=\"13\" text-anchor=\"middle\">" << x_label << "</text>\n";
  os << "<text x=\"" << x0 + 14 << "\" y=\"" << 0.5 * (top + bottom)
     << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 " << x0 + 14
     << " " << 0.5 * (top + bottom) << ")\">" << y_label << "</text>\n";

  if (hline) {
    os << "<line x1=\"" << left << "\" y1=\"" << sy(*hline) << "\" x2=\"" << right
       << "\" y2=\"" << sy(*hline)
       << "\" stroke=\"#999\" stroke-dasharray=\"5,4\" stroke-width=\"1\"/>\n";
  }

  double legend_y = top + 14;
  for (const auto& s : series) {
    os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (i) os << ' ';
      os << sx(s.x[i]) << ',' << sy(s.y[i]);
    }
    os << "\"/>\n";
    os << "<line x1=\"" << right - 90 << "\" y1=\"" << legend_y << "\" x2=\"" << right - 70
       << "\" y2=\"" << legend_y << "\" stroke=\"" << s.color << "\" stroke-width=\"1.5\"/>\n"
       << "<text x=\"" << right - 64 << "\" y=\"" << legend_y + 4
       << "\" font-size=\"12\">" << s.label << "</text>\n";
    legend_y += 16;
  }
}

}  // namespace

std::string format_double(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_profile_csv(std::ostream& os, const RadialProfile& profile) {
  os << "r,u,du\n";
  for (std::size_t i = 0; i < profile.size(); ++i) {
    os << format_double(profile.r[i]) << ',' << format_double(profile.u[i]) << ','
       << format_double(profile.du[i]) << '\n';
  }
}

void write_curve_csv(std::ostream& os, const FrequencyCurve& curve,
                     std::optional<double> mass) {
  os << (mass ? "mu,a,c_minus,c_plus,b_m,n_states\n" : "mu,a,c_minus,c_plus,n_states\n");
  for (const auto& s : curve.samples) {
    os << format_double(s.mu) << ',' << format_double(s.a) << ','
       << format_double(s.c_minus) << ',' << format_double(s.c_plus);
    if (mass) os << ',' << format_double(s.a - *mass * s.mu);
    os << ',' << s.n_states << '\n';
  }
}

std::string branch_name(NormalizedSolution::Branch branch) {
  switch (branch) {
    case NormalizedSolution::Branch::BmLocalMin:
      return "b_m-local-min";
    case NormalizedSolution::Branch::BmLocalMax:
      return "b_m-local-max";
    case NormalizedSolution::Branch::Unclassified:
      break;
  }
  return "unclassified";
}

std::string ground_state_record_json(const GroundState& state,
                                     std::optional<double> mass_target,
                                     const std::string& classification) {
  std::optional<double> mass_error;
  std::optional<double> jm = state.report.j_m;
  if (mass_target) {
    mass_error = std::abs(state.report.mass - *mass_target) / *mass_target;
    if (!jm) jm = state.report.action - state.mu * *mass_target;
  }
  std::ostringstream os;
  os << "{\"mu\":" << format_double(state.mu)
     << ",\"mass\":" << format_double(state.report.mass)
     << ",\"mass_target\":" << json_number_or_null(mass_target)
     << ",\"mass_error\":" << json_number_or_null(mass_error)
     << ",\"action\":" << format_double(state.report.action)
     << ",\"j_m\":" << json_number_or_null(jm)
     << ",\"grad_sq\":" << format_double(state.report.grad_sq)
     << ",\"pohozaev_rel\":" << format_double(state.residuals.pohozaev_rel)
     << ",\"classification\":\"" << classification << "\""
     << ",\"shoot_height\":" << format_double(state.shoot_height) << "}";
  return os.str();
}

std::string normalized_solution_record_json(const NormalizedSolution& solution) {
  std::ostringstream os;
  os << "{\"mu\":" << format_double(solution.mu)
     << ",\"mass\":" << format_double(solution.state.report.mass)
     << ",\"mass_target\":" << format_double(solution.mass_target)
     << ",\"mass_error\":" << format_double(solution.mass_error)
     << ",\"action\":" << format_double(solution.state.report.action)
     << ",\"j_m\":" << format_double(solution.j_m)
     << ",\"grad_sq\":" << format_double(solution.state.report.grad_sq)
     << ",\"pohozaev_rel\":" << format_double(solution.state.residuals.pohozaev_rel)
     << ",\"classification\":\"" << branch_name(solution.classification) << "\""
     << ",\"shoot_height\":" << format_double(solution.state.shoot_height) << "}";
  return os.str();
}

void write_solutions_json(std::ostream& os, const std::vector<NormalizedSolution>& solutions) {
  os << "[";
  for (std::size_t i = 0; i < solutions.size(); ++i) {
    if (i) os << ",";
    os << "\n  " << normalized_solution_record_json(solutions[i]);
  }
  os << (solutions.empty() ? "]\n" : "\n]\n");
}

void write_curve_svg(std::ostream& os, const FrequencyCurve& curve,
                     std::optional<double> mass) {
  const double width = 760, panel_height = 300;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
     << 2 * panel_height
     << "\" font-family=\"sans-serif\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  std::vector<double> lmu;
  for (const auto& s : curve.samples) lmu.push_back(std::log10(s.mu));

  Series c_minus{"c_minus", "#1f6fb2", lmu, {}};
  Series c_plus{"c_plus", "#c0392b", lmu, {}};
  bool distinct = false;
  for (const auto& s : curve.samples) {
    c_minus.y.push_back(s.c_minus);
    c_plus.y.push_back(s.c_plus);
    if (s.c_plus > s.c_minus * (1.0 + 1e-9)) distinct = true;
  }
  std::vector<Series> top{c_minus};
  if (distinct) top.push_back(c_plus);
  svg_panel(os, 0, 0, width, panel_height, "log10(mu)", "c", top, mass);

  Series lower{"a", "#2d7d46", lmu, {}};
  std::string y_label = "a";
  if (mass) {
    lower.label = "b_m";
    y_label = "b_m";
    for (const auto& s : curve.samples) lower.y.push_back(s.a - *mass * s.mu);
  } else {
    for (const auto& s : curve.samples) lower.y.push_back(s.a);
  }
  svg_panel(os, 0, panel_height, width, panel_height, "log10(mu)", y_label, {lower});

  os << "</svg>\n";
}

}  // namespace nls
