#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <random>
#include <span>
#include <utility>
#include <vector>

namespace flexagg {

// std::mt19937_64 output is fixed by the standard; the distributions below are
// spelled out here so sampled data is identical across standard libraries.
using Rng = std::mt19937_64;

// Uniform on [0, 1) with 53 random bits.
inline double uniform_unit(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform integer in [0, bound), bound > 0, by rejection.
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t bound) {
  const std::uint64_t limit = Rng::max() - Rng::max() % bound;
  std::uint64_t draw = rng();
  while (draw >= limit) draw = rng();
  return draw % bound;
}

// Fisher-Yates.
template <typename T>
void shuffle(Rng& rng, std::span<T> values) {
  for (std::size_t i = values.size(); i > 1; --i) {
    std::swap(values[i - 1], values[uniform_index(rng, i)]);
  }
}

// Random permutation of 1..k in one-line notation.
inline std::vector<int> random_one_line(Rng& rng, int k) {
  std::vector<int> perm(static_cast<std::size_t>(k));
  std::iota(perm.begin(), perm.end(), 1);
  shuffle(rng, std::span<int>(perm));
  return perm;
}

// Uniform point of the probability simplex with `count` entries.
inline std::vector<double> random_simplex_weights(Rng& rng, std::size_t count) {
  std::vector<double> weights(count);
  double total = 0.0;
  for (double& w : weights) {
    w = -std::log1p(-uniform_unit(rng));  // Exp(1)
    total += w;
  }
  for (double& w : weights) w /= total;
  return weights;
}

}  // namespace flexagg
