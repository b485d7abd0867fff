#pragma once

#include <string>

namespace csf {

// Shortest decimal representation that round-trips to the same double.
std::string format_double(double value);

std::string format_int(long long value);

} // namespace csf
