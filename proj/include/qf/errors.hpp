#pragma once

#include <stdexcept>
#include <string>

namespace qf {

/// Base class of every error thrown by this library.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed or schema-violating input documents. Messages carry the node path.
struct ParseError : Error {
  using Error::Error;
};

/// Bad arguments to an evaluation: missing variable assignments, dimension
/// mismatches, enumeration guards.
struct EvalError : Error {
  using Error::Error;
};

/// A formula transformation could not be carried out on the given input.
struct TransformError : Error {
  using Error::Error;
};

/// A mathematically guaranteed identity failed numerically; indicates a bug.
struct InternalError : Error {
  using Error::Error;
};

struct TooManyVariables : EvalError {
  using EvalError::EvalError;
};

struct NotPure : EvalError {
  using EvalError::EvalError;
};

struct NotOrthogonal : EvalError {
  using EvalError::EvalError;
};

struct NotReadOnce : TransformError {
  using TransformError::TransformError;
};

struct NonClassicalFormulaOutput : TransformError {
  using TransformError::TransformError;
};

/// The wire-state structure required by the exact dequantization does not
/// hold; `wire` is the input index of the offending wire of the gate under
/// analysis.
struct StructureViolation : TransformError {
  StructureViolation(unsigned wire_index, const std::string& msg)
      : TransformError(msg), wire(wire_index) {}
  unsigned wire;
};

struct SeparationViolated : TransformError {
  using TransformError::TransformError;
};

struct NotSeparable : TransformError {
  using TransformError::TransformError;
};

struct NonClassicalOutput : TransformError {
  using TransformError::TransformError;
};

}  // namespace qf
