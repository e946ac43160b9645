#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "nls/mass_frequency.hpp"
#include "nls/radial_profile.hpp"
#include "nls/shooting.hpp"

namespace nls {

// Every float in the file formats is written with 17 significant digits so
// values round-trip exactly.
std::string format_double(double v);

// Header "r,u,du", one row per grid node.
void write_profile_csv(std::ostream& os, const RadialProfile& profile);

// Header "mu,a,c_minus,c_plus[,b_m],n_states"; the b_m column is present only
// when a mass target is given.  Rows are sorted by mu; gaps are omitted.
void write_curve_csv(std::ostream& os, const FrequencyCurve& curve,
                     std::optional<double> mass);

std::string branch_name(NormalizedSolution::Branch branch);

// One solution record.  Fields, always all present:
// mu, mass, mass_target, mass_error, action, j_m, grad_sq, pohozaev_rel,
// classification, shoot_height.
std::string ground_state_record_json(const GroundState& state,
                                     std::optional<double> mass_target,
                                     const std::string& classification);
std::string normalized_solution_record_json(const NormalizedSolution& solution);

void write_solutions_json(std::ostream& os, const std::vector<NormalizedSolution>& solutions);

// Self-contained SVG: extremal-mass curves against mu (log10 axis) in the top
// panel, b_m (or the least-energy level when no mass target is given) in the
// bottom one.
void write_curve_svg(std::ostream& os, const FrequencyCurve& curve,
                     std::optional<double> mass);

}  // namespace nls
