#pragma once

#include <algorithm>
#include <numeric>
#include <span>
#include <vector>

namespace flexagg::detail {

// Writes into `perm` (1-based one-line) the permutation minimising
// <grad, nu_perm>; `nu` is nonincreasing. `order` is scratch of size p.
inline void lmo_into(std::span<const double> nu, std::span<const double> grad,
                     std::vector<std::size_t>& order, std::span<int> perm) {
  const std::size_t p = nu.size();
  order.resize(p);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return grad[i] < grad[j];
  });
  // Within each run of equal generator entries, hand out ranks by position.
  for (std::size_t begin = 0; begin < p;) {
    std::size_t end = begin + 1;
    while (end < p && nu[end] == nu[begin]) ++end;
    if (end - begin > 1) {
      std::sort(order.begin() + static_cast<std::ptrdiff_t>(begin),
                order.begin() + static_cast<std::ptrdiff_t>(end));
    }
    begin = end;
  }
  for (std::size_t r = 0; r < p; ++r) perm[order[r]] = static_cast<int>(r) + 1;
}

}  // namespace flexagg::detail
