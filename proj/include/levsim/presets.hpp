#pragma once

#include <string>
#include <vector>

#include "levsim/model.hpp"

namespace levsim {
namespace presets {

// Named parameter sets used throughout the tests and examples.  Rates are
// in kHz, times in ms; x, p, n are dimensionless.
std::vector<std::string> names();

// Returns the named preset; throws std::invalid_argument for unknown names.
SystemParams get(const std::string& name);

} // namespace presets
} // namespace levsim
