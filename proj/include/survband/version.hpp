#pragma once

namespace survband {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace survband
