#pragma once

#include <stdexcept>
#include <string>

namespace sturm {

enum class ErrorCode {
  UnknownKind,
  NonIntegrableExponent,
  NonMonotoneTable,
  DomainMismatch,
  EmptyInterval,
  InvalidArgument,
  MeshTooCoarse,
  NonFinite,
  BracketFailure,
  MonotonicityViolation,
  SlopeUnderflow,
  CountMismatch,
  IndexOutOfRange,
  DegenerateRatio,
  LinkAmbiguity,
  EventNotFound,
};

const char* to_string(ErrorCode code);

/// True for errors caused by the caller's input (bad potential, bad angles,
/// bad grid); false for faults detected inside the solvers.
bool is_user_error(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class NonFiniteError : public Error {
 public:
  NonFiniteError(int cell, double mu);
  int cell() const noexcept { return cell_; }

 private:
  int cell_;
};

class BracketFailureError : public Error {
 public:
  BracketFailureError(double lo, double hi, int n);
  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }

 private:
  double lo_, hi_;
};

class MonotonicityViolationError : public Error {
 public:
  MonotonicityViolationError(int row, int col, const std::string& direction);
  int row() const noexcept { return row_; }
  int col() const noexcept { return col_; }

 private:
  int row_, col_;
};

class CountMismatchError : public Error {
 public:
  CountMismatchError(int expected, int found);
  int expected() const noexcept { return expected_; }
  int found() const noexcept { return found_; }

 private:
  int expected_, found_;
};

class LinkAmbiguityError : public Error {
 public:
  LinkAmbiguityError(double angle, int refinement_factor);
  double angle() const noexcept { return angle_; }
  int refinement_factor() const noexcept { return refinement_factor_; }

 private:
  double angle_;
  int refinement_factor_;
};

}  // namespace sturm
