#pragma once

#include <stdexcept>
#include <string>

namespace foggrid {

/// Dimension or key-set mismatch between values that must agree.
struct ShapeError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Invalid or inconsistent configuration (bad key, bad value, bad preset).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Filesystem-level failure (unreadable/unwritable path).
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Unreadable, truncated or version-mismatched checkpoint file.
struct CheckpointError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// API misuse (e.g. reading gradients before running backward).
struct UsageError : std::logic_error {
    using std::logic_error::logic_error;
};

}  // namespace foggrid
