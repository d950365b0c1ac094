#pragma once

#include <stdexcept>
#include <string>

namespace moeflow {

enum class ErrorCode {
  EmptyInput,
  InvalidK,
  InvalidTemperature,
  NumericalDomain,
  UnknownOperator,
  UnknownRouter,
  ShapeMismatch,
  NegativeCycle,
  InfeasibleMarginals,
  BadSpec,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyInput:          return "EmptyInput";
    case ErrorCode::InvalidK:            return "InvalidK";
    case ErrorCode::InvalidTemperature:  return "InvalidTemperature";
    case ErrorCode::NumericalDomain:     return "NumericalDomain";
    case ErrorCode::UnknownOperator:     return "UnknownOperator";
    case ErrorCode::UnknownRouter:       return "UnknownRouter";
    case ErrorCode::ShapeMismatch:       return "ShapeMismatch";
    case ErrorCode::NegativeCycle:       return "NegativeCycle";
    case ErrorCode::InfeasibleMarginals: return "InfeasibleMarginals";
    case ErrorCode::BadSpec:             return "BadSpec";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace moeflow
