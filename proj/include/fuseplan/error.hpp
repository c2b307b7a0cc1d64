#pragma once

#include <stdexcept>
#include <string>

namespace fuseplan {

// Bad input: malformed descriptors, invalid setups, out-of-domain arguments.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Filesystem failures (missing files, unwritable outputs).
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace fuseplan
