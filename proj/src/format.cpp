#include "chargeq/format.hpp"

#include <cmath>
#include <cstdio>

namespace chargeq {

std::string format_number(double value) {
  if (value == 0.0) return "0";  // folds -0
  char buffer[64];
  const int n = std::snprintf(buffer, sizeof buffer, "%.12g", value);
  return std::string(buffer, static_cast<std::size_t>(n));
}

}  // namespace chargeq
