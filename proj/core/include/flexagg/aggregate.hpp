#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "flexagg/fleet.hpp"
#include "flexagg/permutahedron.hpp"

namespace flexagg {

// The exact set of aggregate charging profiles of a fleet: the Minkowski sum,
// over windows, of the embedded permutahedra Pi(nu) of each block.
class AggregateFlexibility {
 public:
  // Throws kBadWindow for windows outside the horizon and kInvalidArgument
  // for repeated windows.
  AggregateFlexibility(TimeHorizon horizon, std::vector<Block> blocks);

  TimeHorizon horizon() const noexcept { return horizon_; }
  std::span<const Block> blocks() const noexcept { return blocks_; }
  double total_energy() const noexcept { return total_energy_; }
  // nullptr when no EV uses `w`.
  const Block* find(Window w) const;

 private:
  TimeHorizon horizon_;
  std::vector<Block> blocks_;  // sorted by window
  double total_energy_ = 0.0;
};

// Validates every request and groups the fleet. Blocks whose generator is all
// zeros are kept.
AggregateFlexibility build(std::span<const EvRequest> fleet,
                           TimeHorizon horizon);

// mu_pi: sum over blocks of embedded_vertex(nu, pi).
std::vector<double> vertex_mu(const AggregateFlexibility& agg,
                              const Permutation& pi);

// Support function of the aggregate set (sum of block supports).
double support_agg(const AggregateFlexibility& agg, std::span<const double> y);

// Upper bound b(S) on sum_{t in S} x_t. `subset` lists 1-based steps and must
// be a nonempty proper subset of 1..n without repeats (kBadSubset otherwise).
double facet_bound(const AggregateFlexibility& agg, std::span<const int> subset);

// Default tolerance for membership tests: 1e-9 * max(1, total energy).
double default_membership_tolerance(const AggregateFlexibility& agg);

// Largest horizon the exhaustive membership test accepts.
inline constexpr int kMaxExhaustiveHorizon = 16;

struct MembershipResult {
  bool member = false;
  // 1-based steps of the first violated bound (by increasing bitmask).
  // Empty when the failure is the energy equality or when x is a member.
  std::vector<int> violated_subset;
  std::string detail;
};

// Checks the energy equality and all 2^n - 2 subset bounds. Throws
// kHorizonTooLarge for n > kMaxExhaustiveHorizon.
MembershipResult membership_exhaustive(const AggregateFlexibility& agg,
                                       std::span<const double> x,
                                       std::optional<double> tol = std::nullopt);

struct ProjectionResult {
  bool member = false;
  double distance = 0.0;  // ||x - closest point found||_2
  int iterations = 0;
};

// Projects x onto the aggregate set with the tracking solver and compares the
// residual against `tol`. Throws kSolverFailure if the solver diverges.
ProjectionResult membership_projection(const AggregateFlexibility& agg,
                                       std::span<const double> x, double tol,
                                       int max_iters = 20000);

// Random point of the aggregate set: per block, a random convex combination
// of `atoms_per_block` random vertices of Pi(nu).
std::vector<double> sample_member(const AggregateFlexibility& agg,
                                  std::uint64_t seed, int atoms_per_block = 3);

}  // namespace flexagg
