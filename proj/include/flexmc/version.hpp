#pragma once

namespace flexmc {

inline constexpr const char* kVersion = "0.1.0";

} // namespace flexmc
