#pragma once

namespace uls {
inline constexpr const char* kVersion = "1.0.0";
}
