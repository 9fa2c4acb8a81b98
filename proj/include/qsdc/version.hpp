#pragma once

namespace qsdc {

inline constexpr const char* kToolName = "qsdcgame";
inline constexpr const char* kToolVersion = "1.0.0";

}  // namespace qsdc
