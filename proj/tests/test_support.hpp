#pragma once

#include <cstdint>

#include "lpp/weights.hpp"

namespace lpp::testing {

// The 2x2 instance used throughout the tests. Enumerating its six paths by
// hand gives G(2,2) = 10 along (0,0)->(0,1)->(0,2)->(1,2)->(2,2).
inline WeightArray two_by_two() {
  return WeightArray::from_function(2, 2, [](int i, int j) {
    if (i == 1 && j == 0) return 2.0;
    if (i == 2 && j == 0) return 1.0;
    if (i == 0 && j == 1) return 4.0;
    if (i == 0 && j == 2) return 2.0;
    if (i == 1 && j == 1) return 1.0;
    if (i == 2 && j == 1) return 2.0;
    if (i == 1 && j == 2) return 3.0;
    if (i == 2 && j == 2) return 1.0;
    return 0.0;
  });
}

inline WeightArray zero_both(double rho, int m, int n, std::uint64_t seed) {
  return apply_boundary(sample_equilibrium(rho, m, n, seed), ZeroBoth{});
}

}  // namespace lpp::testing
