#pragma once

namespace snsim {
inline constexpr const char* kVersion = "0.1.0";
}
