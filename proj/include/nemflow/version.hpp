#pragma once
#include <cstdint>

namespace nemflow {
inline constexpr const char* kVersion = "1.0.0";
inline constexpr std::uint32_t kFileFormatVersion = 1;
}  // namespace nemflow
