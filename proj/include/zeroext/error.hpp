#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace zeroext {

// Every failure carries a stable kind tag so callers (and the CLI exit-code
// mapping) can dispatch without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(kind + ": " + message), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

[[noreturn]] inline void fail(const std::string& kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace zeroext
