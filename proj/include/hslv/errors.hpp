#pragma once

// Exception hierarchy shared by every module. All throwing code paths use one
// of these types so callers can distinguish bad inputs from numerical
// breakdowns and from violated structural guarantees.

#include <stdexcept>
#include <string>

namespace hslv {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// A caller-supplied value violates a documented precondition.
class InvalidInput : public Error {
 public:
  explicit InvalidInput(const std::string& msg) : Error(msg) {}
};

// An iteration failed to converge or a computed value left its valid domain.
class NumericFailure : public Error {
 public:
  explicit NumericFailure(const std::string& msg) : Error(msg) {}
};

// A price lies outside the arbitrage band required for implied-vol inversion.
class BandViolation : public Error {
 public:
  explicit BandViolation(const std::string& msg) : Error(msg) {}
};

// A query point lies outside the domain a surface or curve can answer for.
class ExtrapolationError : public Error {
 public:
  explicit ExtrapolationError(const std::string& msg) : Error(msg) {}
};

// Building a composite object (e.g. a price surface) failed a structural
// invariant; the message names the offending grid cell.
class ConstructionError : public Error {
 public:
  explicit ConstructionError(const std::string& msg) : Error(msg) {}
};

}  // namespace hslv
