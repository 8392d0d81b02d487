#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ddx2 {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class NotPrime : public Error {
public:
  explicit NotPrime(std::uint64_t p)
      : Error(std::to_string(p) + " is not prime"), value(p) {}
  std::uint64_t value;
};

class ShapeMismatch : public Error {
public:
  using Error::Error;
};

class TooLarge : public Error {
public:
  using Error::Error;
};

class BadSubscript : public Error {
public:
  using Error::Error;
};

class MissingW : public Error {
public:
  MissingW() : Error("W must be nonempty when |U| >= 2") {}
};

class VariantViolation : public Error {
public:
  using Error::Error;
};

class EmptyConnectionSet : public Error {
public:
  EmptyConnectionSet() : Error("connection set is empty") {}
};

class InvalidConnectionSet : public Error {
public:
  using Error::Error;
};

class CompletionFailure : public Error {
public:
  explicit CompletionFailure(unsigned budget_)
      : Error("no completion within budget " + std::to_string(budget_)),
        budget(budget_) {}
  unsigned budget;
};

class MissingDelta : public Error {
public:
  explicit MissingDelta(int residue)
      : Error("no delta supplied for d mod 4 = " + std::to_string(residue)) {}
};

class InadmissiblePrime : public Error {
public:
  using Error::Error;
};

class MalformedRecord : public Error {
public:
  using Error::Error;
};

class DegenerateSystem : public Error {
public:
  using Error::Error;
};

// Raised when a search runs past its deadline. `frontier` is the largest
// order not yet refuted.
class TimeBudgetExceeded : public Error {
public:
  TimeBudgetExceeded(std::uint64_t frontier_, std::string what)
      : Error(std::move(what)), frontier(frontier_) {}
  std::uint64_t frontier;
};

} // namespace ddx2
