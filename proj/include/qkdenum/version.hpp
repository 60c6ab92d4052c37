#pragma once

namespace qkdenum {

inline constexpr const char* kToolName = "qkdenum";
inline constexpr const char* kVersion = "0.1.0";

}  // namespace qkdenum
