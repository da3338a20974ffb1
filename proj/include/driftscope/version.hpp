#pragma once

namespace driftscope {

inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace driftscope
