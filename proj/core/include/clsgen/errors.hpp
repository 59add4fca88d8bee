#pragma once

#include <stdexcept>
#include <string>

namespace clsgen {

// Error hierarchy mirrors the CLI exit-code contract:
//   ConfigError -> 2, DataError -> 3, ModelError -> 4.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

class ModelError : public std::runtime_error {
 public:
  explicit ModelError(const std::string& msg) : std::runtime_error(msg) {}
};

// Thrown by the rejection sampler when no latent point satisfies the
// requested attribute combination within the attempt budget.
class UnrealizableAttributeCombination : public ModelError {
 public:
  explicit UnrealizableAttributeCombination(const std::string& msg) : ModelError(msg) {}
};

}  // namespace clsgen
