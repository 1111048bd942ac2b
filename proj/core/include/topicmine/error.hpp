#pragma once

#include <stdexcept>
#include <string>

namespace topicmine {

// Invalid configuration or arguments. The CLI maps this to exit code 1.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Unreadable files, malformed input, format mismatches. Exit code 2.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace topicmine
