#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>

#include "flexagg/aggregate.hpp"
#include "flexagg/parallel.hpp"
#include "flexagg/solver.hpp"

namespace flexagg {
namespace {

std::vector<int> steps_of(std::uint32_t mask, int n) {
  std::vector<int> steps;
  for (int t = 0; t < n; ++t) {
    if (mask & (1u << t)) steps.push_back(t + 1);
  }
  return steps;
}

// Bitmask of the window plus cumulative sums of the sorted generator, so the
// bound contributed by a block is prefix[|S & window|].
struct BlockBound {
  std::uint32_t mask = 0;
  std::vector<double> prefix;
};

}  // namespace

MembershipResult membership_exhaustive(const AggregateFlexibility& agg,
                                       std::span<const double> x,
                                       std::optional<double> tol) {
  const int n = agg.horizon().steps();
  if (n > kMaxExhaustiveHorizon) {
    throw Error(ErrorCode::kHorizonTooLarge,
                "exhaustive membership supports at most " +
                    std::to_string(kMaxExhaustiveHorizon) + " steps, got " +
                    std::to_string(n));
  }
  if (x.size() != static_cast<std::size_t>(n)) {
    throw Error(ErrorCode::kLengthMismatch,
                "profile length does not match the horizon");
  }
  const double eps = tol.value_or(default_membership_tolerance(agg));
  const std::uint32_t full = (1u << n) - 1u;

  MembershipResult result;
  double total = 0.0;
  for (double v : x) total += v;
  if (!(std::abs(total - agg.total_energy()) <= eps)) {
    result.detail = "total " + std::to_string(total) + " differs from energy " +
                    std::to_string(agg.total_energy());
    return result;
  }
  // Cheap pre-filter: x_t < 0 breaks the bound on the complement of {t}.
  for (int t = 0; t < n; ++t) {
    if (x[static_cast<std::size_t>(t)] < -eps) {
      result.violated_subset = steps_of(full & ~(1u << t), n);
      result.detail = "negative entry at step " + std::to_string(t + 1);
      return result;
    }
  }

  std::vector<BlockBound> bounds;
  bounds.reserve(agg.blocks().size());
  for (const Block& block : agg.blocks()) {
    BlockBound bound;
    for (int t = block.window().arrival; t < block.window().departure; ++t) {
      bound.mask |= 1u << (t - 1);
    }
    bound.prefix.assign(block.nu.size() + 1, 0.0);
    for (std::size_t j = 0; j < block.nu.size(); ++j) {
      bound.prefix[j + 1] = bound.prefix[j] + block.nu[j];
    }
    bounds.push_back(std::move(bound));
  }

  // Masks 1 .. full-1 are split into chunks; the smallest violated mask over
  // all chunks is reported.
  const std::size_t count = full > 0 ? full - 1 : 0;
  constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();
  std::atomic<std::uint32_t> best{kNone};
  parallel_chunks(count, 4096, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const auto mask = static_cast<std::uint32_t>(i + 1);
      if (mask > best.load(std::memory_order_relaxed)) return;
      double lhs = 0.0;
      for (std::uint32_t rest = mask; rest != 0; rest &= rest - 1) {
        lhs += x[static_cast<std::size_t>(std::countr_zero(rest))];
      }
      double rhs = 0.0;
      for (const BlockBound& bound : bounds) {
        rhs += bound.prefix[static_cast<std::size_t>(std::popcount(mask & bound.mask))];
      }
      if (lhs > rhs + eps) {
        std::uint32_t current = best.load();
        while (mask < current && !best.compare_exchange_weak(current, mask)) {
        }
        return;
      }
    }
  });
  const std::uint32_t first = best.load();
  if (first != kNone) {
    result.violated_subset = steps_of(first, n);
    result.detail = "subset bound violated";
    return result;
  }
  result.member = true;
  return result;
}

ProjectionResult membership_projection(const AggregateFlexibility& agg,
                                       std::span<const double> x, double tol,
                                       int max_iters) {
  const auto n = static_cast<std::size_t>(agg.horizon().steps());
  if (x.size() != n) {
    throw Error(ErrorCode::kLengthMismatch,
                "profile length does not match the horizon");
  }
  SolverOptions options;
  options.max_iters = max_iters;
  options.windows = WindowSet::kOccupied;
  // The squared distance has to fall well below tol^2 for the test to decide.
  options.gap_tol = 0.01 * tol * tol;
  const SolverSolution solution =
      solve(agg, Objective::tracking({x.begin(), x.end()}), options);
  ProjectionResult result;
  result.distance = std::sqrt(solution.objective_value);
  result.iterations = solution.iterations;
  result.member = result.distance <= tol;
  return result;
}

}  // namespace flexagg
