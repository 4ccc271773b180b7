#pragma once

#include <cstdio>
#include <string>

namespace hyperqif {

/// 12-significant-digit rendering used for all human-readable numeric
/// output, so identical inputs print byte-identical results.
inline std::string format_number(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.12g", value);
    return buffer;
}

}  // namespace hyperqif
