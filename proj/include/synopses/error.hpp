#pragma once

#include <stdexcept>
#include <string>

namespace synopses {

// Bad user-supplied configuration or command-line input (CLI exit code 2).
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Unreadable or structurally invalid input data (CLI exit code 1).
class DataError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace synopses
