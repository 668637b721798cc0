#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace cbpd {

// Malformed arguments, out-of-range indices, unparsable files.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A relation that is not a partial order. `cycle` holds a witness cycle when
// the failure is a directed cycle among cover pairs.
class InvalidPosetError : public InputError {
 public:
  InvalidPosetError(const std::string& what, std::vector<std::size_t> cycle = {})
      : InputError(what), cycle_(std::move(cycle)) {}
  const std::vector<std::size_t>& cycle() const { return cycle_; }

 private:
  std::vector<std::size_t> cycle_;
};

class InvalidFrameError : public InputError {
 public:
  using InputError::InputError;
};

class InvalidMatroidError : public InputError {
 public:
  using InputError::InputError;
};

// An enumeration or memory budget would be exceeded.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cbpd
