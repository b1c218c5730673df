#pragma once

#include <stdexcept>
#include <string>

namespace tfbench {

// Every failure the toolkit reports carries a short machine-readable code
// (e.g. "LINE_MISMATCH") next to the human-readable message. The CLI prints
// them as `error[CODE]: message`.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

}  // namespace tfbench
