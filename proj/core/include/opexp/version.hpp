// version.hpp: library version string

#pragma once

namespace opexp {

inline constexpr const char* kVersion = "0.1.0";

} // namespace opexp
