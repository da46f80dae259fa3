#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <vector>

#include "flexagg/fleet.hpp"
#include "flexagg/random.hpp"

namespace flexagg::testing {

// Valid request with a random window inside `horizon`. E is drawn on [0, pm]
// and occasionally pinned to one of the ends.
inline EvRequest random_request(Rng& rng, TimeHorizon horizon, int index = 0) {
  const int n = horizon.steps();
  const int a = 1 + static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(n)));
  const int d = a + 1 + static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(n + 1 - a)));
  const double m = 0.25 + 3.0 * uniform_unit(rng);
  const double cap = (d - a) * m;
  double energy = cap * uniform_unit(rng);
  const auto pick = uniform_index(rng, 10);
  if (pick == 0) energy = 0.0;
  if (pick == 1) energy = cap;
  if (pick == 2) energy = std::floor(energy / m) * m;  // exact multiple
  return {"ev" + std::to_string(index), energy, a, d, m};
}

inline std::vector<EvRequest> random_fleet(Rng& rng, int count,
                                           TimeHorizon horizon) {
  std::vector<EvRequest> fleet;
  for (int i = 0; i < count; ++i) fleet.push_back(random_request(rng, horizon, i));
  return fleet;
}

inline std::vector<double> random_vector(Rng& rng, std::size_t size,
                                         double lo = -1.0, double hi = 1.0) {
  std::vector<double> v(size);
  for (double& x : v) x = lo + (hi - lo) * uniform_unit(rng);
  return v;
}

inline double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

// All permutations of 1..k in one-line notation, lexicographic order.
inline std::vector<std::vector<int>> all_one_lines(int k) {
  std::vector<int> perm(static_cast<std::size_t>(k));
  std::iota(perm.begin(), perm.end(), 1);
  std::vector<std::vector<int>> all;
  do {
    all.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return all;
}

// y[j] = x[perm[j] - 1], written out independently of the library.
inline std::vector<double> permute(std::span<const double> x,
                                   const std::vector<int>& perm) {
  std::vector<double> y(perm.size());
  for (std::size_t j = 0; j < perm.size(); ++j) y[j] = x[static_cast<std::size_t>(perm[j] - 1)];
  return y;
}

inline double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace flexagg::testing
