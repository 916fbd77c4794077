// Copyright contributors to the epiwarp project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace epiwarp {

// Runtime error carrying a stable machine-readable code next to the message.
// The CLI maps these to its JSON error schema {"code":..., "message":...}.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

// Precondition on caller-supplied values (bad ranges, invalid geometry).
[[noreturn]] inline void throw_domain(const std::string& message) {
  throw Error("domain", message);
}

// Structural misuse between components (shape mismatch, step order).
[[noreturn]] inline void throw_contract(const std::string& message) {
  throw Error("contract", message);
}

[[noreturn]] inline void throw_io(const std::string& message) {
  throw Error("io", message);
}

inline void check_contract(bool ok, const std::string& message) {
  if (!ok) throw_contract(message);
}

inline void check_domain(bool ok, const std::string& message) {
  if (!ok) throw_domain(message);
}

}  // namespace epiwarp
