// Exception hierarchy for the blowup library.
//
// Every failure surfaced by the library derives from blowup::Error so callers
// (the CLI in particular) can map them onto exit codes with a single catch.

#pragma once

#include <stdexcept>
#include <string>

namespace blowup {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A letter outside 1..N, or a malformed word string.
class InvalidWord : public Error {
 public:
  using Error::Error;
};

// An operation was called outside its documented domain.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// A spec file or preset failed to parse or validate.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

// Requested level exceeds the configured cap (BLOWUP_MAX_LEVEL).
class LevelCapExceeded : public Error {
 public:
  using Error::Error;
};

// Tiling is outside the domain of amalgamation: some small tile has no
// partner set, or partner sets are ambiguous.
class NotInDomain : public Error {
 public:
  using Error::Error;
};

// Two constructions that must agree did not.
class InconsistencyError : public Error {
 public:
  using Error::Error;
};

}  // namespace blowup
