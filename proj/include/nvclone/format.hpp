// format.hpp — numeric text rendering shared by the CSV and JSON emitters.
//
// Every floating-point value that leaves the library is printed with 9
// significant digits; g9_round gives the double that such a rendering parses
// back to, so serialized values survive a write/read cycle bit-exactly.

#pragma once

#include <cstdio>
#include <cstdlib>
#include <string>

namespace nvclone::detail {

// shortest representation with 9 significant digits, shared by all writers
inline std::string g9(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return std::string(buf);
}

// nearest double to the 9-significant-digit rendering of v
inline double g9_round(double v) {
    return std::strtod(g9(v).c_str(), nullptr);
}

}  // namespace nvclone::detail
