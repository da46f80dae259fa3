#pragma once

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "flexagg/aggregate.hpp"
#include "flexagg/permutahedron.hpp"

namespace flexagg {

// f(x) = <price, x>
struct LinearCost {
  std::vector<double> price;
};

// f(x) = x' P x + x' P d with P = diag(price), price >= 0.
struct QuadraticPriceCost {
  std::vector<double> price;
  std::vector<double> external_demand;
};

// f(x) = ||x - signal||_2^2
struct TrackingCost {
  std::vector<double> signal;
};

class Objective {
 public:
  using Variant = std::variant<LinearCost, QuadraticPriceCost, TrackingCost>;

  // Throws kDimensionMismatch if the vectors differ in length and
  // kInvalidArgument for a negative quadratic price.
  explicit Objective(Variant cost);

  static Objective linear(std::vector<double> price);
  static Objective quadratic(std::vector<double> price,
                             std::vector<double> external_demand);
  static Objective tracking(std::vector<double> signal);

  const Variant& cost() const noexcept { return cost_; }
  std::size_t size() const noexcept;
  bool is_linear() const noexcept {
    return std::holds_alternative<LinearCost>(cost_);
  }

  double value(std::span<const double> x) const;
  // Second-order coefficient of f along d: f(x + g d) - f(x) - g <grad, d>
  // equals g^2 * curvature(d).
  double curvature(std::span<const double> d) const;

 private:
  Variant cost_;
};

// Linear -> price; quadratic -> 2 P x + P d; tracking -> 2 (x - g).
std::vector<double> gradient(const Objective& objective,
                             std::span<const double> x);

// Vertex of Pi(nu) minimising <grad|window, nu_pi>: the largest entries of nu
// go to the smallest gradient entries. Ties in the gradient resolve to the
// lower position; positions receiving equal nu entries keep increasing order,
// so a constant nu always yields the identity. `grad` spans the horizon.
Permutation lmo_block(const MonotoneVertex& nu, std::span<const double> grad);

enum class StepRule {
  kExactLineSearch,  // closed form for the quadratic objectives, 1 for linear
  kOpenLoop,         // 2 / (k + 2)
};

enum class Direction {
  kFrankWolfe,  // toward the LMO vertex, shrinking every atom
  // One sweep per iteration: each block in turn moves weight from its worst
  // active atom to its LMO vertex, with an exact line search capped at that
  // atom's weight.
  kPairwise,
};

enum class WindowSet {
  kAllWindows,  // one Birkhoff variable per pair a < d of the horizon
  kOccupied,    // only windows that hold at least one EV
};

struct SolverOptions {
  int max_iters = 5000;
  double gap_tol = 1e-6;  // relative to max(1, |f(x)|)
  StepRule step_rule = StepRule::kExactLineSearch;
  // Pairwise steps need the exact line search; kOpenLoop always uses
  // kFrankWolfe. Linear objectives take one unit Frank-Wolfe step either way.
  Direction direction = Direction::kPairwise;
  WindowSet windows = WindowSet::kAllWindows;
};

struct Atom {
  double weight = 0.0;
  Permutation perm;
};

// A doubly stochastic p x p matrix kept as a convex combination of
// permutation matrices, together with its image applied to the block
// generator.
class BirkhoffVariable {
 public:
  BirkhoffVariable(MonotoneVertex nu, std::vector<Atom> atoms);

  Window window() const noexcept { return nu_.window(); }
  const MonotoneVertex& nu() const noexcept { return nu_; }
  std::span<const Atom> atoms() const noexcept { return atoms_; }
  // sum_k weight_k * apply(nu, perm_k), restricted to the window.
  std::span<const double> image() const noexcept { return image_; }
  std::vector<double> embedded_image(TimeHorizon horizon) const;

  // Row-major p x p matrix A with apply(v, perm) = P v summed over atoms, so
  // image() == A nu.
  std::vector<double> implied_matrix() const;

 private:
  MonotoneVertex nu_;
  std::vector<Atom> atoms_;
  std::vector<double> image_;
};

struct SolverSolution {
  TimeHorizon horizon{1};
  std::vector<BirkhoffVariable> variables;  // sorted by window
  std::vector<double> x_star;
  double objective_value = 0.0;
  double fw_gap = 0.0;
  int iterations = 0;
  bool converged = false;

  const BirkhoffVariable* find(Window w) const;
};

// Frank-Wolfe over the product of the block Birkhoff polytopes. The stopping
// test uses the full Frank-Wolfe gap at the start of each iteration. Throws
// kDimensionMismatch when the objective length differs from the horizon.
// A run that hits max_iters returns its last iterate with converged == false.
SolverSolution solve(const AggregateFlexibility& agg, const Objective& objective,
                     const SolverOptions& options = {});

// Entries of the implicit matrix formulation summed over every window of the
// horizon: sum_p (n + 1 - p) p^2 = n (n+1)^2 (n+2) / 12.
std::int64_t decision_variable_count(TimeHorizon horizon);

// Atoms lighter than this are dropped when a solution is finalised.
inline constexpr double kAtomPruneWeight = 1e-14;

}  // namespace flexagg
