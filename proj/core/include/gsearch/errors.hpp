#pragma once

#include <stdexcept>
#include <string>

namespace gsearch {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller violated a precondition (bad size, out-of-range site, bad grid).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// The torus has no exact Dirac momenta (m or n not a multiple of 3).
class DiracUnavailable : public Error {
 public:
  explicit DiracUnavailable(const std::string& what)
      : Error("Dirac states unavailable: " + what) {}
};

/// A resolvent was evaluated within tolerance of one of its poles.
class PoleProximity : public Error {
 public:
  PoleProximity(double energy, double pole)
      : Error("resolvent evaluated at E=" + std::to_string(energy) +
              " too close to pole " + std::to_string(pole)),
        energy_(energy),
        pole_(pole) {}

  double energy() const noexcept { return energy_; }
  double pole() const noexcept { return pole_; }

 private:
  double energy_;
  double pole_;
};

/// A numerical routine failed to meet its postcondition.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace gsearch
