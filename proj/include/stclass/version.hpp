#pragma once

namespace stc {

inline constexpr const char* kEngineVersion = "0.1.0";

} // namespace stc
