#pragma once

#include <stdexcept>
#include <string>

namespace lgot {

// Every library failure derives from Error so the CLI can map it to exit 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParameterDomainError : public Error {
 public:
  using Error::Error;
};

class GeometryError : public Error {
 public:
  using Error::Error;
};

class TraceError : public Error {
 public:
  using Error::Error;
};

class EmptyMeasureError : public Error {
 public:
  using Error::Error;
};

class MapError : public Error {
 public:
  using Error::Error;
};

class PartitionError : public Error {
 public:
  using Error::Error;
};

class OracleInputError : public Error {
 public:
  using Error::Error;
};

class ScanError : public Error {
 public:
  using Error::Error;
};

class ScenarioError : public Error {
 public:
  using Error::Error;
};

// Raised when u cannot be assigned a single level at a point.
class DegenerateRegionError : public Error {
 public:
  using Error::Error;
};

}  // namespace lgot
