#pragma once

namespace cul {

inline constexpr const char* kToolVersion = "0.1.0";

// Checkpoint / report schema version. Bump on any incompatible layout change.
inline constexpr int kFormatVersion = 1;

}  // namespace cul
