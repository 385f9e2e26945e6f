#pragma once

namespace scramble {
inline constexpr const char *version = "1.0.0";
}
