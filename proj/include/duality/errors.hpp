#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace duality {

enum class ErrorKind {
  OutOfRange,
  DomainError,
  NonTerminatingDivergence,
  ZeroDenominatorParam,
  SeriesDivergence,
  UnknownSymbol,
  MissingParam,
  DimMismatch,
  UnassignedSymbol,
  NoCasimir,
  NotApplicable,
  InfeasibleTotal,
  GraphMismatch,
  OutOfSupport,
  InvalidGraph,
  InvalidInitialState,
  StepSizeUnderflow,
  ParseError,
  UnknownCheckName,
  BadParamRange,
  IoError,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries one of the kinds above.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::NonTerminatingDivergence: return "NonTerminatingDivergence";
    case ErrorKind::ZeroDenominatorParam: return "ZeroDenominatorParam";
    case ErrorKind::SeriesDivergence: return "SeriesDivergence";
    case ErrorKind::UnknownSymbol: return "UnknownSymbol";
    case ErrorKind::MissingParam: return "MissingParam";
    case ErrorKind::DimMismatch: return "DimMismatch";
    case ErrorKind::UnassignedSymbol: return "UnassignedSymbol";
    case ErrorKind::NoCasimir: return "NoCasimir";
    case ErrorKind::NotApplicable: return "NotApplicable";
    case ErrorKind::InfeasibleTotal: return "InfeasibleTotal";
    case ErrorKind::GraphMismatch: return "GraphMismatch";
    case ErrorKind::OutOfSupport: return "OutOfSupport";
    case ErrorKind::InvalidGraph: return "InvalidGraph";
    case ErrorKind::InvalidInitialState: return "InvalidInitialState";
    case ErrorKind::StepSizeUnderflow: return "StepSizeUnderflow";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::UnknownCheckName: return "UnknownCheckName";
    case ErrorKind::BadParamRange: return "BadParamRange";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace duality
