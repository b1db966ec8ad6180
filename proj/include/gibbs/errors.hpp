#pragma once

#include <stdexcept>
#include <string>

namespace gibbs {

// Bad user input: malformed rationals, empty supports, regime violations.
// The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Something that should be impossible happened, e.g. both sufficiency and
// necessity certified for the same polynomial. Exit code 3.
class InconsistencyError : public std::logic_error {
 public:
  explicit InconsistencyError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace gibbs
