#pragma once

namespace wavemode {

inline constexpr const char* kVersion = "0.1.0";

} // namespace wavemode
