#pragma once

#include <stdexcept>
#include <string>

namespace rlab {

// Every error carries a short machine-readable code in addition to the
// human message. The CLI prints both on a single stderr line.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

// Malformed literals, descriptors, flags or files.
class InvalidInput : public Error {
 public:
  explicit InvalidInput(const std::string& message) : Error("invalid_input", message) {}
};

// Input is well-formed but violates a mathematical hypothesis.
class PreconditionViolated : public Error {
 public:
  explicit PreconditionViolated(const std::string& message)
      : Error("precondition_violated", message) {}

 protected:
  PreconditionViolated(std::string code, const std::string& message)
      : Error(std::move(code), message) {}
};

class InvalidSpace : public PreconditionViolated {
 public:
  explicit InvalidSpace(const std::string& message)
      : PreconditionViolated("invalid_space", message) {}
};

class NonEqualAtomSpace : public PreconditionViolated {
 public:
  explicit NonEqualAtomSpace(const std::string& message)
      : PreconditionViolated("non_equal_atom_space", message) {}
};

class NotZeroMean : public PreconditionViolated {
 public:
  explicit NotZeroMean(const std::string& message)
      : PreconditionViolated("not_zero_mean", message) {}
};

class EmptyInput : public PreconditionViolated {
 public:
  explicit EmptyInput(const std::string& message)
      : PreconditionViolated("empty_input", message) {}
};

class InfeasibleProblem : public PreconditionViolated {
 public:
  explicit InfeasibleProblem(const std::string& message)
      : PreconditionViolated("infeasible_problem", message) {}
};

class TooManyFreeParameters : public PreconditionViolated {
 public:
  explicit TooManyFreeParameters(const std::string& message)
      : PreconditionViolated("too_many_free_parameters", message) {}
};

// The requested quantity is not representable in exact arithmetic
// (e.g. a fractional power of a rational).
class InexactOperation : public Error {
 public:
  explicit InexactOperation(const std::string& message) : Error("inexact_operation", message) {}
};

class UnsupportedNorm : public Error {
 public:
  explicit UnsupportedNorm(const std::string& message) : Error("unsupported_norm", message) {}
};

}  // namespace rlab
