#include "sturm/errors.hpp"

#include <cstdio>

namespace sturm {

namespace {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownKind: return "UnknownKind";
    case ErrorCode::NonIntegrableExponent: return "NonIntegrableExponent";
    case ErrorCode::NonMonotoneTable: return "NonMonotoneTable";
    case ErrorCode::DomainMismatch: return "DomainMismatch";
    case ErrorCode::EmptyInterval: return "EmptyInterval";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::MeshTooCoarse: return "MeshTooCoarse";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::BracketFailure: return "BracketFailure";
    case ErrorCode::MonotonicityViolation: return "MonotonicityViolation";
    case ErrorCode::SlopeUnderflow: return "SlopeUnderflow";
    case ErrorCode::CountMismatch: return "CountMismatch";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::DegenerateRatio: return "DegenerateRatio";
    case ErrorCode::LinkAmbiguity: return "LinkAmbiguity";
    case ErrorCode::EventNotFound: return "EventNotFound";
  }
  return "Unknown";
}

bool is_user_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownKind:
    case ErrorCode::NonIntegrableExponent:
    case ErrorCode::NonMonotoneTable:
    case ErrorCode::DomainMismatch:
    case ErrorCode::EmptyInterval:
    case ErrorCode::InvalidArgument:
    case ErrorCode::MeshTooCoarse:
    case ErrorCode::IndexOutOfRange:
      return true;
    default:
      return false;
  }
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

NonFiniteError::NonFiniteError(int cell, double mu)
    : Error(ErrorCode::NonFinite,
            "non-finite state in cell " + std::to_string(cell) + " at mu=" + format_double(mu)),
      cell_(cell) {}

BracketFailureError::BracketFailureError(double lo, double hi, int n)
    : Error(ErrorCode::BracketFailure, "phase target for n=" + std::to_string(n) +
                                           " not straddled by probe range [" + format_double(lo) +
                                           ", " + format_double(hi) + "]"),
      lo_(lo),
      hi_(hi) {}

MonotonicityViolationError::MonotonicityViolationError(int row, int col,
                                                       const std::string& direction)
    : Error(ErrorCode::MonotonicityViolation, "eigenvalues function not strictly monotone in " +
                                                  direction + " at (" + std::to_string(row) + ", " +
                                                  std::to_string(col) + ")"),
      row_(row),
      col_(col) {}

CountMismatchError::CountMismatchError(int expected, int found)
    : Error(ErrorCode::CountMismatch, "expected " + std::to_string(expected) +
                                          " interior zeros, found " + std::to_string(found)),
      expected_(expected),
      found_(found) {}

LinkAmbiguityError::LinkAmbiguityError(double angle, int refinement_factor)
    : Error(ErrorCode::LinkAmbiguity, "zero linking ambiguous at angle " + format_double(angle) +
                                          "; refine the grid by a factor of at least " +
                                          std::to_string(refinement_factor)),
      angle_(angle),
      refinement_factor_(refinement_factor) {}

}  // namespace sturm
