#pragma once

namespace qdurr {

inline constexpr const char* version = "0.1.0";

}  // namespace qdurr
