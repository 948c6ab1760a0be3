#pragma once

#include <stdexcept>
#include <string>

namespace synteval {

// Malformed inputs: schema mismatches, bad cells, corrupt state files.
// The CLI maps this to exit code 2.
class DataError : public std::runtime_error {
public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// Bad invocation (flags, config fields). CLI exit code 1.
class UsageError : public std::runtime_error {
public:
  explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace synteval
