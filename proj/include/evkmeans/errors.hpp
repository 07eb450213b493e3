#pragma once

#include <stdexcept>
#include <string>

namespace evkmeans {

// File could not be opened, read, written, or holds no data at all.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// File opened fine but its contents violate the declared format. Messages
// carry the offending line or row number.
struct DataFormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Tail extraction produced no values (all samples in the group, or no value
// exceeds the threshold). Clustering catches this and falls back to plain
// distance semantics for the affected cluster.
struct EmptyTailError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Unrecoverable numerical failure.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace evkmeans
