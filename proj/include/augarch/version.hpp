#pragma once

namespace augarch {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace augarch
