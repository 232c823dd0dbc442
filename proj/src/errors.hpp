#pragma once

#include <stdexcept>
#include <string>

namespace tfwl {

// Invalid user input: bad config JSON, violated model invariants, bad flags.
struct InvalidInput : std::runtime_error {
  explicit InvalidInput(const std::string& msg) : std::runtime_error(msg) {}
};

// A hard resource limit (e.g. the exact-solver site cap) was exceeded.
struct CapExceeded : std::runtime_error {
  explicit CapExceeded(const std::string& msg) : std::runtime_error(msg) {}
};

// An internal consistency check failed (verification probe, invariant assert).
struct CheckFailed : std::runtime_error {
  explicit CheckFailed(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace tfwl
