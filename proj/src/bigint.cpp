#include "starfactor/bigint.hpp"

namespace starfactor {

BigCount matchings_count(std::uint64_t m) {
  BigCount result = 1;
  for (std::uint64_t odd = 1; odd + 1 <= 2 * m; odd += 2) result *= odd;
  return result;
}

BigCount factorial(std::uint64_t n) {
  BigCount result = 1;
  for (std::uint64_t i = 2; i <= n; ++i) result *= i;
  return result;
}

}  // namespace starfactor
