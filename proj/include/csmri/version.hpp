#pragma once

namespace csmri {
inline constexpr const char* kVersion = "0.1.0";
}
