#pragma once

#include <stdexcept>
#include <string>

namespace recmle {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A parameter or probability lies outside the admissible domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Malformed input: empty data, NaN, sizes below a formula's minimum.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

// The sufficient statistic is zero, so no finite estimate exists.
class DegenerateSampleError : public Error {
 public:
  using Error::Error;
};

// n/T (or a root-finding target) lies outside the range of the rate map.
class RangeError : public Error {
 public:
  using Error::Error;
};

// The sequential record generator ran past its draw budget.
class RecordCapExceeded : public Error {
 public:
  using Error::Error;
};

// A Monte Carlo run had too many failed replications.
class RunError : public Error {
 public:
  using Error::Error;
};

}  // namespace recmle
