#pragma once

namespace mrsusp {
inline constexpr const char* kVersion = "0.1.0";
}
