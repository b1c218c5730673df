#include "tfbench/direction.hpp"

#include "tfbench/error.hpp"

namespace tfbench {

std::string_view to_string(Direction direction) {
  return direction == Direction::kTj2Fa ? "tj2fa" : "fa2tj";
}

Direction parse_direction(std::string_view text) {
  if (text == "tj2fa") return Direction::kTj2Fa;
  if (text == "fa2tj") return Direction::kFa2Tj;
  throw Error("BAD_DIRECTION", "unknown direction '" + std::string(text) + "' (expected tj2fa or fa2tj)");
}

}  // namespace tfbench
