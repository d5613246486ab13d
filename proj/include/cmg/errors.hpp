#pragma once

#include <stdexcept>
#include <string>

namespace cmg {

enum class ErrorKind {
  ShapeMismatch,
  SingularMatrix,
  NonPolynomialCoefficient,
  NotUnitriangular,
  RepeatedPositions,
  RepeatedEigenvalues,
  NonDiagonalExact,
  NotOnFiber,
  UnsupportedExactExponential,
  NotNilpotent,
  SpectrumMismatch,
  SingularJet,
  YNotScalar,
  SingularValueAtSpectrum,
  OutsideBigCell,
  UnsupportedRank,
  DegenerateCell,
  NotInBetaImage,
  UnsupportedCell,
  NotDifferential,
  UnsupportedPoleLocus,
  NotKRepresentable,
  InvalidArgument,
  ParseError,
};

const char* error_kind_name(ErrorKind kind);

/// Every failure raised by the library carries a machine-readable kind and,
/// where useful, a JSON-encoded payload (offending order, determinant value...).
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what, std::string payload = {})
      : std::runtime_error(std::string(error_kind_name(kind)) + ": " + what),
        kind_(kind),
        payload_(std::move(payload)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& payload() const noexcept { return payload_; }

 private:
  ErrorKind kind_;
  std::string payload_;
};

inline const char* error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::SingularMatrix: return "SingularMatrix";
    case ErrorKind::NonPolynomialCoefficient: return "NonPolynomialCoefficient";
    case ErrorKind::NotUnitriangular: return "NotUnitriangular";
    case ErrorKind::RepeatedPositions: return "RepeatedPositions";
    case ErrorKind::RepeatedEigenvalues: return "RepeatedEigenvalues";
    case ErrorKind::NonDiagonalExact: return "NonDiagonalExact";
    case ErrorKind::NotOnFiber: return "NotOnFiber";
    case ErrorKind::UnsupportedExactExponential: return "UnsupportedExactExponential";
    case ErrorKind::NotNilpotent: return "NotNilpotent";
    case ErrorKind::SpectrumMismatch: return "SpectrumMismatch";
    case ErrorKind::SingularJet: return "SingularJet";
    case ErrorKind::YNotScalar: return "YNotScalar";
    case ErrorKind::SingularValueAtSpectrum: return "SingularValueAtSpectrum";
    case ErrorKind::OutsideBigCell: return "OutsideBigCell";
    case ErrorKind::UnsupportedRank: return "UnsupportedRank";
    case ErrorKind::DegenerateCell: return "DegenerateCell";
    case ErrorKind::NotInBetaImage: return "NotInBetaImage";
    case ErrorKind::UnsupportedCell: return "UnsupportedCell";
    case ErrorKind::NotDifferential: return "NotDifferential";
    case ErrorKind::UnsupportedPoleLocus: return "UnsupportedPoleLocus";
    case ErrorKind::NotKRepresentable: return "NotKRepresentable";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace cmg
