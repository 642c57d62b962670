#pragma once

#include <stdexcept>

namespace trickkit {

/// Bad configuration or malformed input data (CLI exit code 2).
struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Filesystem trouble: missing, unreadable or unwritable paths (CLI exit code 3).
struct io_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Numeric failure such as a non-finite training loss (CLI exit code 4).
struct numeric_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace trickkit
