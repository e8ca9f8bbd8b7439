#pragma once

#include <string>

#include "json.hpp"

namespace lapnet {

/// Fixed 17-significant-digit rendering, "C" locale, no trailing newline.
std::string format_double(double x);

/// Serializes with sorted object keys and `format_double` for floats, so the
/// text is byte-identical across runs. Output ends with a newline.
std::string to_deterministic_json(const nlohmann::json& value);

}  // namespace lapnet
