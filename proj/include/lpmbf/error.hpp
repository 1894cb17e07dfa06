#pragma once

#include <stdexcept>
#include <string>

namespace lpmbf {

// Malformed input text (prefix notation, table files). CLI exit code 1.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A structural constraint was violated (k minimum, index capacity).
// CLI exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CapacityError : ConfigError {
  using ConfigError::ConfigError;
};

}  // namespace lpmbf
