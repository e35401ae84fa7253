#pragma once

#include <stdexcept>
#include <string>

namespace vfcp {

/// Base class for all domain errors raised by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UnknownNodeError : Error {
  explicit UnknownNodeError(const std::string& id) : Error("unknown node: " + id) {}
};

struct InvalidPathError : Error {
  using Error::Error;
};

struct UnknownSegmentError : Error {
  explicit UnknownSegmentError(const std::string& id) : Error("unknown road segment: " + id) {}
};

/// A trace line that cannot be parsed. Carries the 1-based line number.
struct MalformedRecordError : Error {
  MalformedRecordError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_number(line) {}
  std::size_t line_number;
};

struct EmptyClusterError : Error {
  using Error::Error;
};

struct TargetExceedsNodesError : Error {
  using Error::Error;
};

struct UndefinedScoreError : Error {
  using Error::Error;
};

struct NoControlNodeError : Error {
  using Error::Error;
};

struct NoSourcesError : Error {
  using Error::Error;
};

struct InstanceTooLargeError : Error {
  using Error::Error;
};

struct InfeasibleError : Error {
  using Error::Error;
};

struct InvalidSpecError : Error {
  using Error::Error;
};

/// Raised when a heuristic cost undercuts a provably optimal cost.
struct GapInconsistencyError : Error {
  using Error::Error;
};

}  // namespace vfcp
