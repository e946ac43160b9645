#include "nls/cli_io.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "nls/errors.hpp"
#include "nls/formats.hpp"
#include "nls/mass_frequency.hpp"
#include "nls/shooting.hpp"
#include "nls/verify.hpp"

namespace nls {

namespace {

double parse_number(const std::string& text, const std::string& what) {
  try {
    std::size_t pos = 0;
    double v = std::stod(text, &pos);
    if (pos != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw UsageError("--g: cannot parse " + what + " from '" + text + "'");
  }
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find(sep, start);
    if (end == std::string::npos) {
      parts.push_back(text.substr(start));
      break;
    }
    parts.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  return parts;
}

// "[+|-][coef*]s^exp"
PowerTerm parse_term(const std::string& raw) {
  std::string text = raw;
  double sign = 1.0;
  if (!text.empty() && (text[0] == '+' || text[0] == '-')) {
    if (text[0] == '-') sign = -1.0;
    text = text.substr(1);
  }
  double coef = 1.0;
  std::size_t star = text.find('*');
  if (star != std::string::npos) {
    coef = parse_number(text.substr(0, star), "coefficient");
    text = text.substr(star + 1);
  }
  if (text.rfind("s^", 0) != 0)
    throw UsageError("--g: combined term '" + raw + "' must look like [c*]s^p");
  double exp = parse_number(text.substr(2), "exponent");
  return {sign * coef, exp};
}

// CLI11 option callback: parse one double, flag a conversion failure.
bool store_double(const std::string& text, std::optional<double>& slot) {
  try {
    std::size_t pos = 0;
    double v = std::stod(text, &pos);
    if (pos != text.size()) return false;
    slot = v;
    return true;
  } catch (const std::exception&) {
    return false;
  }
}

std::ofstream open_output(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw SolverError("cannot open output file: " + path);
  return os;
}

std::string swap_extension(const std::string& path, const std::string& ext) {
  std::size_t dot = path.find_last_of('.');
  std::size_t slash = path.find_last_of('/');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
    return path + ext;
  return path.substr(0, dot) + ext;
}

std::vector<double> make_grid(const RunConfig& config, const NonlinearitySpec& spec) {
  if (!config.mu_min != !config.mu_max)
    throw UsageError("--mu-min and --mu-max must be given together");
  if (!config.mu_min) return default_mu_grid(spec, config.steps);
  if (!(*config.mu_min > 0.0) || !(*config.mu_max > *config.mu_min))
    throw UsageError("need 0 < --mu-min < --mu-max");
  std::vector<double> grid(config.steps);
  if (config.steps == 1) {
    grid[0] = std::sqrt(*config.mu_min * *config.mu_max);
    return grid;
  }
  const double llo = std::log(*config.mu_min), lhi = std::log(*config.mu_max);
  for (int i = 0; i < config.steps; ++i)
    grid[i] = std::exp(llo + (lhi - llo) * i / (config.steps - 1.0));
  return grid;
}

int run_solve(const RunConfig& config) {
  NonlinearitySpec spec = config.spec();
  auto states = multi_start_ground_states(spec, config.dim, *config.mu, config.n_starts);
  const GroundState& state = states.front();

  std::string record = ground_state_record_json(state, config.mass, "none");
  std::cout << record << "\n";
  if (states.size() > 1)
    std::cerr << "note: " << states.size()
              << " distinct minimal-action states; reporting the least mass\n";
  if (!config.out.empty()) {
    auto js = open_output(config.out + ".json");
    js << record << "\n";
    auto cs = open_output(config.out + ".csv");
    write_profile_csv(cs, state.profile);
    std::cerr << "wrote " << config.out << ".json and " << config.out << ".csv\n";
  }
  return 0;
}

int run_scan(const RunConfig& config) {
  NonlinearitySpec spec = config.spec();
  FrequencyCurve curve = scan(spec, config.dim, make_grid(config, spec), config.n_starts);

  for (const auto& gap : curve.gaps) std::cerr << "gap: " << gap << "\n";
  std::cerr << "interior local minima of c_minus: " << count_interior_minima(curve)
            << "\n";
  std::cerr << "note: extremal masses taken over deduplicated multi-start "
               "minimal-action states (n-starts = "
            << config.n_starts << ")\n";

  if (config.out.empty()) {
    write_curve_csv(std::cout, curve, config.mass);
  } else {
    auto os = open_output(config.out);
    write_curve_csv(os, curve, config.mass);
    std::cerr << "wrote " << config.out << "\n";
    if (config.plot) {
      std::string svg_path = swap_extension(config.out, ".svg");
      auto svg = open_output(svg_path);
      write_curve_svg(svg, curve, config.mass);
      std::cerr << "wrote " << svg_path << "\n";
    }
  }
  return 0;
}

int run_find(const RunConfig& config) {
  NonlinearitySpec spec = config.spec();
  FrequencyCurve curve = scan(spec, config.dim, make_grid(config, spec), config.n_starts);
  for (const auto& gap : curve.gaps) std::cerr << "gap: " << gap << "\n";

  std::vector<NormalizedSolution> solutions;
  int code = 0;
  try {
    solutions = find_normalized(curve, *config.mass, config.tol);
  } catch (const NoSolutionError& e) {
    std::cerr << e.what() << "\n";
    code = 1;
  }
  if (config.out.empty()) {
    write_solutions_json(std::cout, solutions);
  } else {
    auto os = open_output(config.out);
    write_solutions_json(os, solutions);
    std::cerr << "wrote " << config.out << " (" << solutions.size() << " solutions)\n";
  }
  return code;
}

int run_mu_star(const RunConfig& config) {
  double star = mu_star(config.spec());
  if (std::isfinite(star))
    std::cout << format_double(star) << "\n";
  else
    std::cout << "inf\n";
  return 0;
}

int run_verify(const RunConfig& config) {
  auto results = run_acceptance(config.suite);
  if (results.empty()) {
    std::cerr << "no acceptance criterion matches --suite '" << config.suite << "'\n";
    return 2;
  }
  int failures = 0;
  for (const auto& r : results) {
    std::cout << (r.passed ? "[PASS] " : "[FAIL] ") << r.name << " - " << r.detail
              << "\n";
    if (!r.passed) ++failures;
  }
  std::cout << (failures == 0 ? "all criteria passed"
                              : std::to_string(failures) + " criteria FAILED")
            << " (" << results.size() << " run)\n";
  return failures == 0 ? 0 : 1;
}

}  // namespace

NonlinearitySpec parse_nonlinearity(const std::string& text) {
  std::string name = text;
  std::string args;
  std::size_t colon = text.find(':');
  if (colon != std::string::npos) {
    name = text.substr(0, colon);
    args = text.substr(colon + 1);
  }

  if (name == "power") {
    std::optional<double> p;
    for (const auto& kv : split(args, ',')) {
      if (kv.rfind("p=", 0) == 0)
        p = parse_number(kv.substr(2), "exponent p");
      else
        throw UsageError("--g power: unknown parameter '" + kv + "'");
    }
    if (!p) throw UsageError("--g power requires p=<exponent>");
    try {
      return NonlinearitySpec::pure_power(*p);
    } catch (const std::invalid_argument& e) {
      throw UsageError(std::string("--g power: ") + e.what());
    }
  }
  if (name == "cubic-quintic") {
    double a = 1.0, b = 1.0;
    if (!args.empty()) {
      for (const auto& kv : split(args, ',')) {
        if (kv.rfind("a=", 0) == 0)
          a = parse_number(kv.substr(2), "coefficient a");
        else if (kv.rfind("b=", 0) == 0)
          b = parse_number(kv.substr(2), "coefficient b");
        else
          throw UsageError("--g cubic-quintic: unknown parameter '" + kv + "'");
      }
    }
    try {
      return NonlinearitySpec::cubic_quintic(a, b);
    } catch (const std::invalid_argument& e) {
      throw UsageError(std::string("--g cubic-quintic: ") + e.what());
    }
  }
  if (name == "combined") {
    if (args.empty()) throw UsageError("--g combined requires a term list");
    std::vector<PowerTerm> terms;
    for (const auto& part : split(args, ',')) terms.push_back(parse_term(part));
    try {
      return NonlinearitySpec::combined_powers(std::move(terms));
    } catch (const std::invalid_argument& e) {
      throw UsageError(std::string("--g combined: ") + e.what());
    }
  }
  throw UsageError("--g: unknown family '" + name +
                   "' (expected power, cubic-quintic, or combined)");
}

NonlinearitySpec RunConfig::spec() const {
  NonlinearitySpec parsed = parse_nonlinearity(g_string);
  if (!truncate_flag) return parsed;
  try {
    return truncate(parsed);
  } catch (const NoZeroFoundError& e) {
    throw UsageError(std::string("--truncate: ") + e.what());
  }
}

RunConfig parse_args(int argc, const char* const* argv) {
  CLI::App app{"radial ground states and prescribed-mass solutions of\n"
               "-Delta u + mu u = g(u) in R^N"};
  app.require_subcommand(1);
  app.fallthrough(false);

  RunConfig config;
  struct SubFlags {
    CLI::App* cmd;
    RunConfig::Command command;
  };
  std::vector<SubFlags> subs;

  auto add_common = [&](CLI::App* cmd, bool needs_g) {
    auto* g = cmd->add_option("--g", config.g_string,
                              "nonlinearity, e.g. power:p=3, cubic-quintic:a=1,b=1, "
                              "combined:+1*s^3,-1*s^5");
    if (needs_g) g->required();
    cmd->add_flag("--truncate", config.truncate_flag,
                  "replace g by 0 above its smallest positive zero");
    cmd->add_option("--dim", config.dim, "space dimension N >= 2")
        ->check(CLI::Range(2, 16));
    cmd->add_option("--n-starts", config.n_starts, "multi-start seed count")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--out", config.out, "output path");
  };

  auto* solve = app.add_subcommand("solve", "compute one ground state at a fixed mu");
  add_common(solve, true);
  double mu_value = 0;
  auto* mu_opt = solve->add_option("--mu", mu_value, "frequency mu in (0, mu_star)");
  mu_opt->required();
  solve->add_option("--mass", [&config](const CLI::results_t& res) {
    return store_double(res[0], config.mass);
  }, "optional mass target for the report");
  subs.push_back({solve, RunConfig::Command::Solve});

  auto add_grid = [&](CLI::App* cmd) {
    cmd->add_option("--mu-min", [&config](const CLI::results_t& res) {
      return store_double(res[0], config.mu_min);
    }, "lower end of the frequency grid");
    cmd->add_option("--mu-max", [&config](const CLI::results_t& res) {
      return store_double(res[0], config.mu_max);
    }, "upper end of the frequency grid");
    cmd->add_option("--steps", config.steps, "number of grid frequencies")
        ->check(CLI::PositiveNumber);
  };

  auto* scan_cmd = app.add_subcommand("scan", "trace a(mu), c_minus(mu), c_plus(mu)");
  add_common(scan_cmd, true);
  add_grid(scan_cmd);
  scan_cmd->add_option("--mass", [&config](const CLI::results_t& res) {
    return store_double(res[0], config.mass);
  }, "mass target: adds the b_m column");
  scan_cmd->add_flag("--plot", config.plot, "also write an SVG plot (requires --out)");
  subs.push_back({scan_cmd, RunConfig::Command::Scan});

  auto* find_cmd = app.add_subcommand("find", "locate prescribed-mass solutions");
  add_common(find_cmd, true);
  add_grid(find_cmd);
  double mass_value = 0;
  find_cmd->add_option("--mass", mass_value, "prescribed mass m > 0")->required();
  find_cmd->add_option("--tol", config.tol, "relative mass tolerance")
      ->check(CLI::PositiveNumber);
  subs.push_back({find_cmd, RunConfig::Command::Find});

  auto* mu_star_cmd = app.add_subcommand("mu-star", "print the frequency threshold");
  add_common(mu_star_cmd, true);
  subs.push_back({mu_star_cmd, RunConfig::Command::MuStar});

  auto* verify_cmd = app.add_subcommand("verify", "run the acceptance checks");
  verify_cmd->add_option("--suite", config.suite, "run only criteria whose name matches");
  subs.push_back({verify_cmd, RunConfig::Command::Verify});

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e);
    std::exit(0);
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  for (const auto& sub : subs) {
    if (sub.cmd->parsed()) {
      config.command = sub.command;
      break;
    }
  }
  if (solve->parsed()) config.mu = mu_value;
  if (find_cmd->parsed()) config.mass = mass_value;
  if (config.plot && config.out.empty())
    throw UsageError("scan --plot requires --out");
  if (config.mu_min.has_value() != config.mu_max.has_value())
    throw UsageError("--mu-min and --mu-max must be given together");
  if (config.command == RunConfig::Command::Find && !(*config.mass > 0.0))
    throw UsageError("find: --mass must be positive");
  return config;
}

int run(const RunConfig& config) {
  switch (config.command) {
    case RunConfig::Command::Solve:
      return run_solve(config);
    case RunConfig::Command::Scan:
      return run_scan(config);
    case RunConfig::Command::Find:
      return run_find(config);
    case RunConfig::Command::MuStar:
      return run_mu_star(config);
    case RunConfig::Command::Verify:
      return run_verify(config);
  }
  return 2;
}

int main_entry(int argc, const char* const* argv) {
  try {
    RunConfig config = parse_args(argc, argv);
    return run(config);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const SolverError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace nls
