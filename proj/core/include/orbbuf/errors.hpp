#pragma once

#include <stdexcept>
#include <string>

namespace orbbuf {

// Error taxonomy drives the CLI exit codes: usage problems exit with 1,
// malformed input data with 2, simulation-time failures with 3.
struct UsageError : std::runtime_error {
  explicit UsageError(const std::string& msg) : std::runtime_error(msg) {}
};

struct DataError : std::runtime_error {
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

struct PgmError : DataError {
  enum class Kind { bad_magic, bad_header, unsupported_maxval, truncated_payload, io };
  Kind kind;
  PgmError(Kind k, const std::string& msg) : DataError(msg), kind(k) {}
};

struct TraceError : DataError {
  explicit TraceError(const std::string& msg) : DataError(msg) {}
};

struct SimError : std::runtime_error {
  explicit SimError(const std::string& msg) : std::runtime_error(msg) {}
};

// Thrown when a frame arrives at the send buffer with an id that is not
// strictly greater than every id seen before it.
struct OrderingError : SimError {
  explicit OrderingError(const std::string& msg) : SimError(msg) {}
};

}  // namespace orbbuf
