#pragma once

namespace wavecount {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace wavecount
