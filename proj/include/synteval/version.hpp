#pragma once

namespace synteval {
inline constexpr const char* kVersion = "0.1.0";
}
