#pragma once

namespace sscl {
inline constexpr const char* kVersion = "0.1.0";
}
