#pragma once

#include <stdexcept>
#include <string>

namespace pmgame {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bloch vector outside the unit ball.
class InvalidStateError : public Error {
 public:
  using Error::Error;
};

/// Malformed input: wrong sizes, incomplete POVMs, constraint violations.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the domain where a construction is defined.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A derived a=1 preparation is not a positive operator.
class InfeasiblePreparationError : public Error {
 public:
  InfeasiblePreparationError(int index, const std::string& what)
      : Error(what), index_(index) {}
  int index() const noexcept { return index_; }

 private:
  int index_;
};

/// The check does not cover the given input (e.g. non-coplanar POVMs).
class NotApplicableError : public Error {
 public:
  using Error::Error;
};

}  // namespace pmgame
