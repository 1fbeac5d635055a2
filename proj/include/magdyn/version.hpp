#pragma once

namespace magdyn {

inline constexpr const char* kVersion = "0.1.0";

} // namespace magdyn
