#pragma once

#include <stdexcept>
#include <string>

namespace marl {

// Invalid configuration: mismatched dimensions, out-of-range constants.
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

// API called out of order or with the wrong number of arguments.
class UsageError : public std::logic_error {
 public:
  explicit UsageError(const std::string& what) : std::logic_error(what) {}
};

// Non-finite loss or gradient. Training aborts when this is raised.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

class NotEnoughSamples : public std::runtime_error {
 public:
  explicit NotEnoughSamples(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace marl
