#pragma once

namespace foldfinder {

inline constexpr int kVersionMajor = 1;
inline constexpr int kVersionMinor = 0;
inline constexpr int kVersionPatch = 0;
inline constexpr const char* kVersionString = "1.0.0";

// Bumped whenever the JSON/CSV output layout changes.
inline constexpr int kSchemaVersion = 1;

}  // namespace foldfinder
