#pragma once

#include <stdexcept>
#include <string>

namespace fastcv {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Invalid argument (bad dimensions, out-of-range parameter, shape mismatch).
class ArgumentError : public Error {
public:
  using Error::Error;
};

/// A linear system is singular or too ill-conditioned to solve.
class SingularityError : public Error {
public:
  SingularityError(const std::string& msg, double rcond_estimate)
      : Error(msg), rcond(rcond_estimate) {}
  double rcond;
};

/// (I - H_Te) is singular for a fold; the analytical update cannot proceed.
class SingularFoldError : public Error {
public:
  SingularFoldError(const std::string& msg, int fold_index)
      : Error(msg), fold(fold_index) {}
  int fold;
};

/// A class has no samples where at least one is required.
class DegenerateClassError : public Error {
public:
  using Error::Error;
};

/// A training fold is missing a class.
class DegenerateFoldError : public Error {
public:
  DegenerateFoldError(const std::string& msg, int fold_index)
      : Error(msg), fold(fold_index) {}
  int fold;
};

/// Eigenvalues outside their theoretical range, large imaginary parts, etc.
class NumericalDegeneracyError : public Error {
public:
  using Error::Error;
};

/// A metric is undefined on the given input (e.g. AUC with one class).
class UndefinedMetricError : public Error {
public:
  using Error::Error;
};

/// File could not be read or written.
class IoError : public Error {
public:
  using Error::Error;
};

/// Malformed input file.
class ParseError : public Error {
public:
  ParseError(const std::string& msg, int line_number)
      : Error(msg), line(line_number) {}
  int line;
};

}  // namespace fastcv
