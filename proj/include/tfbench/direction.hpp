#pragma once

#include <string>
#include <string_view>

namespace tfbench {

enum class Direction { kTj2Fa, kFa2Tj };

std::string_view to_string(Direction direction);

// Accepts "tj2fa" / "fa2tj"; throws Error("BAD_DIRECTION") otherwise.
Direction parse_direction(std::string_view text);

}  // namespace tfbench
