#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nori {

enum class ErrorKind {
  NotPrime,
  DegreeZero,
  Singular,
  Overflow,
  CapExceeded,
  DomainTooLarge,
  UnknownFactor,
  NotNilpotent,
  NotUnipotent,
  CharTooSmall,
  UnsupportedFamily,
  MissingAmbient,
  NonCompact,
  NotIntegral,
  SingularReduction,
  SchemaError,
  InvalidArgument,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotPrime: return "NotPrime";
    case ErrorKind::DegreeZero: return "DegreeZero";
    case ErrorKind::Singular: return "Singular";
    case ErrorKind::Overflow: return "Overflow";
    case ErrorKind::CapExceeded: return "CapExceeded";
    case ErrorKind::DomainTooLarge: return "DomainTooLarge";
    case ErrorKind::UnknownFactor: return "UnknownFactor";
    case ErrorKind::NotNilpotent: return "NotNilpotent";
    case ErrorKind::NotUnipotent: return "NotUnipotent";
    case ErrorKind::CharTooSmall: return "CharTooSmall";
    case ErrorKind::UnsupportedFamily: return "UnsupportedFamily";
    case ErrorKind::MissingAmbient: return "MissingAmbient";
    case ErrorKind::NonCompact: return "NonCompact";
    case ErrorKind::NotIntegral: return "NotIntegral";
    case ErrorKind::SingularReduction: return "SingularReduction";
    case ErrorKind::SchemaError: return "SchemaError";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

/// Process exit codes shared by every CLI subcommand.
namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int failure = 1;
inline constexpr int refuted = 2;
inline constexpr int cap_exceeded = 3;
inline constexpr int non_compact = 4;
inline constexpr int unknown_factor = 5;
inline constexpr int certified_heuristic = 6;
inline constexpr int inconclusive = 7;
}  // namespace exit_code

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

constexpr int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::CapExceeded:
    case ErrorKind::DomainTooLarge: return exit_code::cap_exceeded;
    case ErrorKind::NonCompact: return exit_code::non_compact;
    case ErrorKind::UnknownFactor: return exit_code::unknown_factor;
    default: return exit_code::failure;
  }
}

}  // namespace nori
