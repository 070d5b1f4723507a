#pragma once

#include <stdexcept>
#include <string>

namespace fracframe {

/// Base of every error raised by the library. The CLI maps these to exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation (t outside [0,1], alpha <= 0, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Requested work exceeds a configured budget (point counts, refinement levels).
class ResourceError : public Error {
 public:
  using Error::Error;
};

class InvalidIfsError : public Error {
 public:
  using Error::Error;
};

/// A limit process (mass function, integral bracket) failed to settle.
class NonConvergenceError : public Error {
 public:
  using Error::Error;
};

class NotOnCurveError : public Error {
 public:
  using Error::Error;
};

/// The staircase is locally flat, so the difference quotient has no denominator.
class NonDifferentiableError : public Error {
 public:
  using Error::Error;
};

/// Curvature vanishes (or the derivative triple degenerates) so normal/binormal do not exist.
class FrameUndefinedError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(int line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace fracframe
