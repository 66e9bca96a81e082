#pragma once

#include <stdexcept>
#include <string>

namespace msk {

/// Base class for all errors raised by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed or incompatible input: space mismatches, unknown labels,
/// bad arguments, violated operation preconditions.
struct InputError : Error {
  using Error::Error;
};

/// Structural failure while reading a document (syntax, references,
/// totality, rational grammar).
struct ParseError : Error {
  using Error::Error;
};

/// A kernel fiber carries mass outside its fiber. Names the offending atom.
struct ConcentrationError : Error {
  std::string codomain_point;
  std::string atom;
  std::string mass;
  ConcentrationError(std::string y, std::string x, std::string m)
      : ConcentrationError("", std::move(y), std::move(x), std::move(m)) {}
  ConcentrationError(const std::string& owner, std::string y, std::string x, std::string m)
      : Error((owner.empty() ? std::string() : "kernel '" + owner + "': ") +
              "concentration violated: measure at '" + y + "' has mass " + m +
              " at '" + x + "' outside the fiber"),
        codomain_point(std::move(y)), atom(std::move(x)), mass(std::move(m)) {}
};

/// mu is not absolutely continuous with respect to nu.
struct NotAbsolutelyContinuousError : Error {
  std::string witness;
  explicit NotAbsolutelyContinuousError(std::string point)
      : Error("not absolutely continuous: point '" + point +
              "' carries mass but the reference measure vanishes there"),
        witness(std::move(point)) {}
};

/// The pushforward of mu and nu have different supports.
struct NotClassPreservingError : Error {
  std::string witness;
  explicit NotClassPreservingError(std::string point)
      : Error("not measure-class-preserving: supports differ at '" + point + "'"),
        witness(std::move(point)) {}
};

/// A connecting-map compatibility equation fails. Names the point and equation.
struct CompatibilityError : Error {
  std::string point;
  std::string equation;
  CompatibilityError(std::string pt, std::string eq)
      : Error("compatibility violated at '" + pt + "': " + eq),
        point(std::move(pt)), equation(std::move(eq)) {}
};

/// A groupoid axiom fails. Carries the full violation list.
struct GroupoidAxiomError : Error {
  using Error::Error;
};

} // namespace msk
