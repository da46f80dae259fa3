#pragma once

#include <span>
#include <string>
#include <vector>

#include "flexagg/aggregate.hpp"
#include "flexagg/fleet.hpp"
#include "flexagg/solver.hpp"

namespace flexagg {

struct EvProfile {
  std::string id;
  std::vector<double> profile;  // length n
};

// Per-EV charging profiles, in fleet order, and their elementwise sum.
struct Schedule {
  std::vector<EvProfile> profiles;
  std::vector<double> aggregate;
};

// u^i = A* v^i, with A* the implied doubly stochastic matrix of the EV's
// window and v^i its monotone vertex. Throws kFleetMismatch when an EV's
// window has no variable in `solution` or the horizons differ.
Schedule schedule(const SolverSolution& solution,
                  std::span<const EvRequest> fleet,
                  const AggregateFlexibility& agg);

struct VerifyOptions {
  double aggregate_tol = 1e-9;  // absolute, on ||sum u - x*||_inf
  double ev_tol = 1e-7;         // per EV, scaled by max(1, E^i)
};

struct EvViolation {
  std::string id;
  std::string kind;  // "outside-window", "below-zero", "above-power", "energy"
  int step = 0;      // 1-based; 0 for the energy check
  double amount = 0.0;
};

struct VerifyReport {
  bool tracking_ok = false;
  bool feasibility_ok = false;
  double aggregate_residual = 0.0;  // ||sum u - x*||_inf
  std::vector<EvViolation> violations;

  bool passed() const noexcept { return tracking_ok && feasibility_ok; }
};

// Checks sum_i u^i == x* and u^i in P^i for every EV. Never throws on a
// failed check; mismatched lengths are reported as violations.
VerifyReport verify(const Schedule& sched, std::span<const double> x_star,
                    std::span<const EvRequest> fleet,
                    const VerifyOptions& options = {});

// Output form of a schedule: in-window entries within tolerance below zero are
// set to 0 and the removed amount is added to the EV's largest in-window entry,
// so every emitted profile is nonnegative with an unchanged sum.
Schedule clamp_for_output(Schedule sched, std::span<const EvRequest> fleet);

}  // namespace flexagg
