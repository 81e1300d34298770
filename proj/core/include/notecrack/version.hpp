#pragma once

namespace notecrack {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace notecrack
