#pragma once

#include <string>

namespace chargeq {

/// 12 significant digits, scientific notation below 1e-4 (printf "%.12g").
std::string format_number(double value);

}  // namespace chargeq
