#pragma once

#include <stdexcept>
#include <string>

namespace disca {

//! Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

//! Malformed or non-finite input data.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

//! Row or column counts that do not line up.
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

//! A parameter outside its admissible range.
class InvalidParameter : public Error {
 public:
  using Error::Error;
};

//! A constant sample, for which the test statistic is undefined.
class DegenerateSample : public Error {
 public:
  using Error::Error;
};

//! xi - psi <= 0: the second DC component is not convex.
class ConvexityViolation : public Error {
 public:
  using Error::Error;
};

//! A non-finite iterate inside an optimizer.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

//! Every restart of the direction solver failed.
class SolverFailure : public Error {
 public:
  using Error::Error;
};

//! CSV ingestion failure; the message carries the row/column location.
class ParseError : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

//! Subspaces that cannot be compared (different rank or ambient dimension).
class InvalidComparison : public Error {
 public:
  using Error::Error;
};

}  // namespace disca
