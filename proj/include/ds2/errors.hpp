#pragma once

#include <stdexcept>
#include <string>

namespace ds2 {

// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string &what) : std::runtime_error(what) {}
};

// Argument outside the documented domain of an operation.
class DomainError : public Error {
public:
  using Error::Error;
};

// Evaluation requested on a branch cut without a side prescription.
class CutError : public DomainError {
public:
  using DomainError::DomainError;
};

// Pole of a meromorphic function (Gamma at non-positive integers, ...).
class PoleError : public DomainError {
public:
  using DomainError::DomainError;
};

// Iterative procedure (quadrature refinement, extrapolation) did not settle.
class ConvergenceError : public Error {
public:
  ConvergenceError(const std::string &what, double achieved)
      : Error(what), m_achieved(achieved) {}
  double achieved() const { return m_achieved; }

private:
  double m_achieved;
};

// A test function support leaves the admissible chart window.
class SupportError : public DomainError {
public:
  using DomainError::DomainError;
};

// Finite-dimensional construction became numerically rank deficient.
class ConditioningError : public Error {
public:
  using Error::Error;
};

} // namespace ds2
