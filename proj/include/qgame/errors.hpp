#pragma once

#include <stdexcept>
#include <string>

namespace qgame {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad argument value (zero vector, non-positive tolerance, unsorted grid).
class DomainError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class InvalidOperator : public Error {
 public:
  using Error::Error;
};

// A matrix offered as a density operator violates one of its invariants.
class InvalidState : public Error {
 public:
  using Error::Error;
};

class InvalidKernel : public Error {
 public:
  using Error::Error;
};

class DegenerateKernel : public InvalidKernel {
 public:
  using InvalidKernel::InvalidKernel;
};

class InfeasibleConstraint : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace qgame
