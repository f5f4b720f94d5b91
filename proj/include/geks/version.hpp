#pragma once

#define GEKS_VERSION "0.1.0"

namespace geks {
inline const char* version() { return GEKS_VERSION; }
}  // namespace geks
