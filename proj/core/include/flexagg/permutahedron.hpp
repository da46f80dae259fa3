#pragma once

#include <span>
#include <vector>

#include "flexagg/fleet.hpp"

namespace flexagg {

// A bijection of {1..k} in one-line notation.
class Permutation {
 public:
  // Throws kInvalidArgument unless `one_line` holds each of 1..k exactly once.
  explicit Permutation(std::vector<int> one_line);

  static Permutation identity(int size);

  int size() const noexcept { return static_cast<int>(one_line_.size()); }
  // Value (1-based) at 0-based position j.
  int operator[](std::size_t j) const { return one_line_[j]; }
  std::span<const int> one_line() const noexcept { return one_line_; }
  bool is_identity() const noexcept;

  Permutation inverse() const;

  friend bool operator==(const Permutation&, const Permutation&) = default;
  friend auto operator<=>(const Permutation&, const Permutation&) = default;

 private:
  std::vector<int> one_line_;
};

// Permuted copy of x: position j receives x[pi[j]] (1-based pi values).
// This convention is used everywhere a permutation acts on a vector.
std::vector<double> apply(std::span<const double> x, const Permutation& pi);

// Unchecked form of `apply` writing into `out`; pi values are 1-based.
inline void apply_into(std::span<const double> x, std::span<const int> pi,
                       std::span<double> out) {
  for (std::size_t j = 0; j < pi.size(); ++j) {
    out[j] = x[static_cast<std::size_t>(pi[j] - 1)];
  }
}

// Order ranking of pi[a..d-1]: each extracted entry is replaced by its rank
// among the extracted entries (1 = smallest).
Permutation rank_within_window(const Permutation& pi, Window w);

// nu permuted by the window ranking of pi and padded with zeros to length n.
std::vector<double> embedded_vertex(const MonotoneVertex& nu,
                                    const Permutation& pi, TimeHorizon horizon);

// max over permutations of <nu_pi, y>. Pairs the sorted entries of nu and y.
double support(const MonotoneVertex& nu, std::span<const double> y);

// Pi(nu1) (+) Pi(nu2) = Pi(nu1 + nu2) for two generators on one window.
MonotoneVertex minkowski_add(const MonotoneVertex& nu1,
                             const MonotoneVertex& nu2);

}  // namespace flexagg
