#pragma once

namespace sublap {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace sublap
