#pragma once

#include <stdexcept>
#include <string>

namespace kgr {

// Error taxonomy. The CLI maps these onto exit codes:
// config -> 2, data -> 3, transport -> 4.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad flags, bad config files, inconsistent settings.
struct ConfigError : Error {
  using Error::Error;
};

// Malformed input data: triple files, datasets, mock scripts, traces.
struct DataError : Error {
  using Error::Error;
};

// A topic entity that cannot be resolved in the loaded graph.
struct UnknownTopicError : DataError {
  using DataError::DataError;
};

// Model/embedding backend failures after retries.
struct TransportError : Error {
  using Error::Error;
};

// Precondition violations on library operations.
struct DomainError : Error {
  using Error::Error;
};

}  // namespace kgr
