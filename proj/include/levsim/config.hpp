#pragma once

#include <string>

#include "levsim/model.hpp"

namespace levsim {
namespace config {

// Parses a flat key = value parameter description.  Accepted keys are the
// SystemParams fields (omega_z, gamma_g, A_t, A_p, N_0, gamma_f, Gamma_f)
// or, instead of the last two, the microphysical triple chi, Phi, G.  '#'
// starts a comment, blank lines are skipped.  Unknown or duplicate keys,
// malformed numbers, a partial triple, or mixing the triple with explicit
// feedback coefficients throw std::invalid_argument naming the line.
// omega_z, gamma_g, A_t, A_p and N_0 must all be present; the feedback
// description is either the complete pair, the complete triple, or absent
// (no feedback).  The assembled parameters are validated before return.
SystemParams parse_params_text(const std::string& text);

// parse_params_text applied to the contents of a file.
SystemParams load_params(const std::string& path);

// Config-file text (key = value lines at full precision) that reproduces
// params exactly through parse_params_text.
std::string format_params_text(const SystemParams& params);

} // namespace config
} // namespace levsim
