#pragma once

namespace limitlab {

inline constexpr const char* kVersion = "limitlab 0.1.0";

}  // namespace limitlab
