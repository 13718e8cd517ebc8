#pragma once

#include <stdexcept>
#include <string>

namespace singspline {

// Thrown when a computation fails for numerical reasons (singular Gram
// matrix, ill-conditioned system, invalid geometry sample). Distinct from
// std::invalid_argument so the CLI can map it to a separate exit code.
struct numerical_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr int kMaxDegree = 8;

// Evaluations with u below this threshold go through the singular-vertex
// limit branch (t = v/u is undefined there).
inline constexpr double kSingularGuard = 1e-14;

}  // namespace singspline
