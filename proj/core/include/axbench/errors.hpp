#pragma once

#include <stdexcept>
#include <string>

namespace axbench {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Violated precondition: wrong shape, parent outside its domain, bad index.
class ContractError : public Error {
 public:
  using Error::Error;
};

/// A counterfactual model failed to produce an output (e.g. external peer crashed).
class ModelError : public Error {
 public:
  using Error::Error;
};

/// Simulated intervention impossible because a joint cell has no samples.
class SupportError : public Error {
 public:
  using Error::Error;
};

/// Malformed or truncated file payload.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Wire protocol violation (bad handshake, unknown id, malformed message).
class ProtocolError : public ModelError {
 public:
  using ModelError::ModelError;
};

/// Observation not known to a lookup-based model.
class LookupError : public ModelError {
 public:
  using ModelError::ModelError;
};

/// Oracle training failed (single class, non-finite loss, singular system).
class TrainingError : public Error {
 public:
  using Error::Error;
};

}  // namespace axbench
