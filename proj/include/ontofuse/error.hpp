#pragma once

#include <stdexcept>
#include <string>

namespace ontofuse {

/// Error codes for every failure the library reports. Anything else thrown
/// from this namespace is a programming error, not an input condition.
enum class ErrorCode {
  MissingId,             // stanza without an id tag
  MalformedLine,         // tag line without ": " separator, bad stanza header
  DanglingIntersection,  // exactly one intersection_of line in a stanza
  EmptyTermSet,
  InvalidThreshold,
  UnknownEndpoint,       // mapping references a class absent from its module
  TooFewModules,
  NotAClash,
  RepairIncomplete,
  MaxRoundsExceeded,
  ConfigError,
  IoError,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message)
      : std::runtime_error(std::move(message)), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

const char* error_code_name(ErrorCode code);

}  // namespace ontofuse
