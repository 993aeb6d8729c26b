#pragma once

namespace roughscl {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace roughscl
