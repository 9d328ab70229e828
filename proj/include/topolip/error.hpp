#pragma once

#include <stdexcept>
#include <string>

namespace topolip {

// Invalid call shape: mismatched dimensions, wrong arity, incompatible inputs.
class UsageError : public std::invalid_argument {
 public:
  explicit UsageError(const std::string& what) : std::invalid_argument(what) {}
};

// A numeric parameter outside its admissible range.
class ParameterError : public std::invalid_argument {
 public:
  explicit ParameterError(const std::string& what) : std::invalid_argument(what) {}
};

// Missing or malformed trace / diagram / report files.
class IngestionError : public std::runtime_error {
 public:
  explicit IngestionError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace topolip
