#pragma once

#include <string>
#include <string_view>

#include "ctt/domain.hpp"

namespace ctt {

/// Line-oriented model description:
///   base <name> <size>
///   rankcap <n>
///   const <name> : <type> = <element literal>
/// Blank lines and `#` comments are ignored. Constants are read after all
/// base declarations, so their order in the file does not matter.
ModelConfig parse_model(std::string_view text);
ModelConfig load_model(const std::string& path);

/// Writes a model back in the same format.
std::string render(const ModelConfig& m);

}  // namespace ctt
