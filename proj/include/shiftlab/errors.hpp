#pragma once

#include <stdexcept>
#include <string>

namespace shiftlab {

// Error taxonomy. Callers that violate a documented precondition get a
// ContractError; malformed input files get SchemaError/DataError; numerical
// degeneracies (singular matrices, zero bandwidths) get NumericError.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ShapeError : Error {
  using Error::Error;
};

struct ContractError : Error {
  using Error::Error;
};

struct SchemaError : Error {
  using Error::Error;
};

struct DataError : Error {
  using Error::Error;
};

struct NumericError : Error {
  using Error::Error;
};

struct DegenerateBandwidthError : NumericError {
  using NumericError::NumericError;
};

struct InconsistencyError : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

struct TrainingDivergedError : Error {
  TrainingDivergedError(const std::string& what, long iter)
      : Error(what), iteration(iter) {}
  long iteration;
};

}  // namespace shiftlab
