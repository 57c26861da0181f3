#include "psrisk/numfmt.hpp"

#include <cstdio>
#include <cstdlib>

namespace psrisk {

std::string sci(double value) {
    if (value == 0.0) {
        return "0E+00";  // canonical zero, sign of -0.0 dropped
    }
    char buf[48];
    for (int precision = 0; precision <= 17; ++precision) {
        std::snprintf(buf, sizeof buf, "%.*E", precision, value);
        if (std::strtod(buf, nullptr) == value) {
            break;
        }
    }
    return buf;
}

std::string sci3(double value) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.2E", value);
    return buf;
}

}  // namespace psrisk
