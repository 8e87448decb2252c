#pragma once

namespace entkit {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace entkit
