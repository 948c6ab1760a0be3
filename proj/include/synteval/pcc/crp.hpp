#pragma once

#include <cstddef>
#include <vector>

#include "synteval/rng.hpp"

namespace synteval::pcc {

// Sequential seating from a Chinese restaurant process: an item joins an
// existing block with probability proportional to its size, or opens a new
// block with probability proportional to alpha. Block ids are contiguous.
inline std::vector<int> crp_partition(double alpha, std::size_t n, Rng& rng) {
  std::vector<int> assignment(n, 0);
  std::vector<double> sizes;
  for (std::size_t i = 0; i < n; ++i) {
    double total = static_cast<double>(i) + alpha;
    std::uniform_real_distribution<double> unit(0.0, total);
    double u = unit(rng);
    int block = static_cast<int>(sizes.size());
    for (std::size_t k = 0; k < sizes.size(); ++k) {
      u -= sizes[k];
      if (u < 0) {
        block = static_cast<int>(k);
        break;
      }
    }
    if (block == static_cast<int>(sizes.size()))
      sizes.push_back(1.0);
    else
      sizes[static_cast<std::size_t>(block)] += 1.0;
    assignment[i] = block;
  }
  return assignment;
}

}  // namespace synteval::pcc
