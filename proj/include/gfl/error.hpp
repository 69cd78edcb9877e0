#pragma once

#include <stdexcept>
#include <string>

namespace gfl {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Configurations on the wrong volume, subsets that are not subsets.
class DomainError : public Error {
 public:
  using Error::Error;
};

class CapacityError : public Error {
 public:
  using Error::Error;
};

class ArgumentError : public Error {
 public:
  using Error::Error;
};

// Conditioning on an event of probability zero.
class NullConditionError : public Error {
 public:
  using Error::Error;
};

class PositivityError : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class GeometryError : public Error {
 public:
  using Error::Error;
};

// An energy or energy field that fails its cocycle law.
class InconsistentError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace gfl
