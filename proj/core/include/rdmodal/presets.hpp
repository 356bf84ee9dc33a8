#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "rdmodal/signal_model.hpp"

namespace rdmodal {

/// Reference signals signal1..signal5. Throws std::invalid_argument for an
/// unknown name.
SignalSpec preset(std::string_view name);

std::vector<std::string> preset_names();

/// One-line human description of a preset (sizes and mode count).
std::string describe(const SignalSpec& spec);

}  // namespace rdmodal
