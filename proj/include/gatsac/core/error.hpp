#pragma once

#include <stdexcept>
#include <string>

namespace gatsac {

// Invalid or out-of-range configuration value; message names the offending key.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Tensor / parameter shape disagreement.
struct ShapeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Filesystem failure; message carries the path.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Unreadable or mismatched checkpoint content.
struct CheckpointError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Training aborted (e.g. repeated non-finite losses).
struct TrainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace gatsac
