#pragma once

#include <stdexcept>
#include <string>

namespace radgrowth {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Input object fails a structural check (monotonicity, membership, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Quadrature did not settle; keeps the last two estimates for diagnosis.
class NumericalError : public Error {
 public:
  NumericalError(const std::string& what, double previous, double last)
      : Error(what), previous_(previous), last_(last) {}
  double previous() const noexcept { return previous_; }
  double last() const noexcept { return last_; }

 private:
  double previous_;
  double last_;
};

class ResourceError : public Error {
 public:
  using Error::Error;
};

class CertificationFailure : public Error {
 public:
  CertificationFailure(const std::string& clause, const std::string& witness)
      : Error("certification failed: " + clause + " at " + witness),
        clause_(clause),
        witness_(witness) {}
  const std::string& clause() const noexcept { return clause_; }
  const std::string& witness() const noexcept { return witness_; }

 private:
  std::string clause_;
  std::string witness_;
};

}  // namespace radgrowth
