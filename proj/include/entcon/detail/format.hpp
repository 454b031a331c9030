#pragma once

#include <cstdio>
#include <string>

namespace entcon::detail {

// %.12g with C-locale semantics; shared by every CSV writer so output is
// byte-stable for fixed inputs.
inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

inline std::string to_binary_string(unsigned long value, int width) {
    if (width < 1) width = 1;
    std::string s(static_cast<std::size_t>(width), '0');
    for (int i = width - 1; i >= 0; --i, value >>= 1)
        if (value & 1ul) s[static_cast<std::size_t>(i)] = '1';
    return s;
}

} // namespace entcon::detail
