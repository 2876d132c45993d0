#pragma once

#include <stdexcept>
#include <string>

namespace swards {

// Bad inputs or violated preconditions: malformed files, dimension
// mismatches, invalid flag combinations. CLI maps these to exit code 2.
struct input_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Structurally valid input the math cannot handle: all-duplicate data,
// a multi-point cluster with zero spread and no floor, and the like.
// CLI maps these to exit code 1.
struct degenerate_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// No barrier-avoiding path exists between two points.
struct unreachable_error : degenerate_error {
    using degenerate_error::degenerate_error;
};

} // namespace swards
