#pragma once

namespace gnnlab {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace gnnlab
