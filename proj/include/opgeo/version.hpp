#pragma once

namespace opgeo {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace opgeo
