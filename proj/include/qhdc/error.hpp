#pragma once

#include <stdexcept>
#include <string>

namespace qhdc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Dimension is not acceptable for the operation (too small, not a power of two).
class InvalidDimension : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// Requested register or ancilla count exceeds the configured cap.
class ResourceLimit : public Error {
 public:
  using Error::Error;
};

/// Projection onto an outcome with zero probability.
class ImpossibleOutcome : public Error {
 public:
  using Error::Error;
};

/// Vector carries no usable signal (all zero, RMS 0).
class DegenerateVector : public Error {
 public:
  using Error::Error;
};

/// Cosine similarity with a zero-norm operand.
class UndefinedSimilarity : public DegenerateVector {
 public:
  using DegenerateVector::DegenerateVector;
};

/// Coherent sum of the bundled states vanished (alpha == 0).
class CancellationError : public DegenerateVector {
 public:
  using DegenerateVector::DegenerateVector;
};

/// Malformed input file.
class FormatError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace qhdc
