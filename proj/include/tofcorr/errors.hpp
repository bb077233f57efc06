#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace tofcorr {

// Bad argument values, shape mismatches, malformed config files.
class input_error : public std::invalid_argument {
 public:
  explicit input_error(const std::string& what) : std::invalid_argument(what) {}
};

// Thrown when an exhaustive routine would exceed its configured work cap.
class cap_exceeded : public std::runtime_error {
 public:
  cap_exceeded(const std::string& what, std::uint64_t required)
      : std::runtime_error(what), required_cap(required) {}

  std::uint64_t required_cap;
};

}  // namespace tofcorr
