#pragma once

#include <string>

namespace psrisk {

// Shortest round-trip decimal in uppercase scientific notation, e.g.
// 0.0125 -> "1.25E-02". Parsing the result reproduces the input bit-for-bit.
std::string sci(double value);

// Three significant digits, table style: 1.00E-07. Display only.
std::string sci3(double value);

}  // namespace psrisk
