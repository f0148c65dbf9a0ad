#pragma once

#include <stdexcept>
#include <string>

namespace dmb {

// Bad caller-supplied data: dimension mismatches, invalid densities, negative
// radii and the like.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Invalid run configuration (batch size not a multiple of the node count,
// b not dividing mu for interlaced runs, ...).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Schedule produced a non-positive step parameter.
class ScheduleError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Graph is not connected or otherwise unusable.
class TopologyError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A run could not proceed (exhausted source, zero batches, ...).
class RunError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Root finder failed to bracket or converge.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Requested quantity is not defined for this problem (e.g. closed-form
// expected loss on a logistic stream).
class UnsupportedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Filesystem / stream failure while reading or writing run artifacts.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dmb
