#include "flexagg/permutahedron.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

namespace flexagg {

Permutation::Permutation(std::vector<int> one_line)
    : one_line_(std::move(one_line)) {
  std::vector<bool> seen(one_line_.size(), false);
  for (int value : one_line_) {
    if (value < 1 || value > size() || seen[static_cast<std::size_t>(value - 1)]) {
      throw Error(ErrorCode::kInvalidArgument,
                  "not a permutation of 1.." + std::to_string(size()));
    }
    seen[static_cast<std::size_t>(value - 1)] = true;
  }
}

Permutation Permutation::identity(int size) {
  std::vector<int> one_line(static_cast<std::size_t>(size));
  std::iota(one_line.begin(), one_line.end(), 1);
  return Permutation(std::move(one_line));
}

bool Permutation::is_identity() const noexcept {
  for (std::size_t j = 0; j < one_line_.size(); ++j) {
    if (one_line_[j] != static_cast<int>(j) + 1) return false;
  }
  return true;
}

Permutation Permutation::inverse() const {
  std::vector<int> inv(one_line_.size());
  for (std::size_t j = 0; j < one_line_.size(); ++j) {
    inv[static_cast<std::size_t>(one_line_[j] - 1)] = static_cast<int>(j) + 1;
  }
  return Permutation(std::move(inv));
}

std::vector<double> apply(std::span<const double> x, const Permutation& pi) {
  if (x.size() != static_cast<std::size_t>(pi.size())) {
    throw Error(ErrorCode::kLengthMismatch,
                "cannot permute " + std::to_string(x.size()) +
                    " entries with a permutation of size " +
                    std::to_string(pi.size()));
  }
  std::vector<double> out(x.size());
  apply_into(x, pi.one_line(), out);
  return out;
}

Permutation rank_within_window(const Permutation& pi, Window w) {
  check_window(w, TimeHorizon(pi.size()));
  const auto slice = pi.one_line().subspan(static_cast<std::size_t>(w.offset()),
                                           static_cast<std::size_t>(w.length()));
  std::vector<std::size_t> order(slice.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return slice[i] < slice[j]; });
  std::vector<int> ranks(slice.size());
  for (std::size_t r = 0; r < order.size(); ++r) {
    ranks[order[r]] = static_cast<int>(r) + 1;
  }
  return Permutation(std::move(ranks));
}

std::vector<double> embedded_vertex(const MonotoneVertex& nu,
                                    const Permutation& pi, TimeHorizon horizon) {
  if (pi.size() != horizon.steps()) {
    throw Error(ErrorCode::kLengthMismatch,
                "permutation size " + std::to_string(pi.size()) +
                    " does not match horizon " +
                    std::to_string(horizon.steps()));
  }
  const Window w = nu.window();
  check_window(w, horizon);
  const Permutation local = rank_within_window(pi, w);
  std::vector<double> out(static_cast<std::size_t>(horizon.steps()), 0.0);
  apply_into(nu.values(), local.one_line(),
             std::span<double>(out).subspan(static_cast<std::size_t>(w.offset()),
                                            nu.size()));
  return out;
}

double support(const MonotoneVertex& nu, std::span<const double> y) {
  if (y.size() != nu.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                "direction has " + std::to_string(y.size()) +
                    " entries, generator has " + std::to_string(nu.size()));
  }
  std::vector<double> sorted(y.begin(), y.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double value = 0.0;
  for (std::size_t j = 0; j < sorted.size(); ++j) value += nu[j] * sorted[j];
  return value;
}

MonotoneVertex minkowski_add(const MonotoneVertex& nu1,
                             const MonotoneVertex& nu2) {
  if (nu1.window() != nu2.window()) {
    throw Error(ErrorCode::kWindowMismatch,
                "Minkowski addition needs generators on the same window");
  }
  std::vector<double> sum(nu1.size());
  for (std::size_t j = 0; j < sum.size(); ++j) sum[j] = nu1[j] + nu2[j];
  return MonotoneVertex(nu1.window(), std::move(sum));
}

}  // namespace flexagg
