#pragma once

#include <string>

namespace nlpl {

// Shortest round-trip decimal form of x; "inf", "-inf" and "nan" for the
// non-finite values. Output is locale independent and deterministic.
std::string num(double x);

}  // namespace nlpl
