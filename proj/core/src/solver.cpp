#include "flexagg/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <unordered_map>

#include "lmo.hpp"

namespace flexagg {

BirkhoffVariable::BirkhoffVariable(MonotoneVertex nu, std::vector<Atom> atoms)
    : nu_(std::move(nu)), atoms_(std::move(atoms)), image_(nu_.size(), 0.0) {
  std::vector<double> permuted(nu_.size());
  for (const Atom& atom : atoms_) {
    if (atom.perm.size() != static_cast<int>(nu_.size())) {
      throw Error(ErrorCode::kLengthMismatch,
                  "atom permutation size does not match its window");
    }
    apply_into(nu_.values(), atom.perm.one_line(), permuted);
    for (std::size_t j = 0; j < permuted.size(); ++j) {
      image_[j] += atom.weight * permuted[j];
    }
  }
}

std::vector<double> BirkhoffVariable::embedded_image(TimeHorizon horizon) const {
  std::vector<double> out(static_cast<std::size_t>(horizon.steps()), 0.0);
  std::copy(image_.begin(), image_.end(),
            out.begin() + window().offset());
  return out;
}

std::vector<double> BirkhoffVariable::implied_matrix() const {
  const std::size_t p = nu_.size();
  std::vector<double> matrix(p * p, 0.0);
  for (const Atom& atom : atoms_) {
    for (std::size_t row = 0; row < p; ++row) {
      matrix[row * p + static_cast<std::size_t>(atom.perm[row] - 1)] +=
          atom.weight;
    }
  }
  return matrix;
}

const BirkhoffVariable* SolverSolution::find(Window w) const {
  const auto it = std::lower_bound(
      variables.begin(), variables.end(), w,
      [](const BirkhoffVariable& v, Window key) { return v.window() < key; });
  return it != variables.end() && it->window() == w ? &*it : nullptr;
}

std::int64_t decision_variable_count(TimeHorizon horizon) {
  const std::int64_t n = horizon.steps();
  std::int64_t count = 0;
  for (std::int64_t p = 1; p <= n; ++p) count += (n + 1 - p) * p * p;
  return count;
}

namespace {

// Atom weights are stored relative to a running scale so that the (1 - gamma)
// shrink of every iteration costs O(1) per block.
class BlockState {
 public:
  explicit BlockState(MonotoneVertex nu)
      : nu_(std::move(nu)),
        offset_(static_cast<std::size_t>(nu_.window().offset())),
        image_(nu_.values().begin(), nu_.values().end()),
        candidate_perm_(nu_.size()),
        candidate_image_(nu_.size()) {
    std::vector<int> identity(nu_.size());
    for (std::size_t j = 0; j < identity.size(); ++j) {
      identity[j] = static_cast<int>(j) + 1;
    }
    add_weight(identity, 1.0);
  }

  std::size_t offset() const { return offset_; }
  std::span<const double> image() const { return image_; }
  std::span<const double> candidate_image() const { return candidate_image_; }
  std::span<const double> away_image() const { return away_image_; }

  // Runs the linear minimisation oracle against the full-horizon gradient.
  void run_lmo(std::span<const double> grad) {
    detail::lmo_into(nu_.values(), grad.subspan(offset_, nu_.size()), order_,
                     candidate_perm_);
    apply_into(nu_.values(), candidate_perm_, candidate_image_);
  }

  // Selects the active atom maximising <grad, nu_perm> and returns its weight.
  double run_away(std::span<const double> grad) {
    const auto g = grad.subspan(offset_, nu_.size());
    const auto nu = nu_.values();
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < perms_.size(); ++k) {
      double value = 0.0;
      for (std::size_t j = 0; j < g.size(); ++j) {
        value += g[j] * nu[static_cast<std::size_t>(perms_[k][j] - 1)];
      }
      if (value > best) {
        best = value;
        away_ = k;
      }
    }
    away_image_.resize(nu_.size());
    apply_into(nu, perms_[away_], away_image_);
    return stored_[away_] * scale_;
  }

  // True when every permutation gives the same image.
  bool rigid() const { return nu_.size() < 2 || nu_[0] == nu_[nu_.size() - 1]; }

  // Moves `mass` from the away atom to the candidate; `drop` moves all of it.
  void pairwise_step(double mass, bool drop) {
    for (std::size_t j = 0; j < image_.size(); ++j) {
      image_[j] += mass * (candidate_image_[j] - away_image_[j]);
    }
    double moved = stored_[away_];
    if (drop) {
      remove_atom(away_);
    } else {
      moved = std::min(moved, mass / scale_);
      stored_[away_] -= moved;
    }
    add_weight(candidate_perm_, moved);
  }

  // Moves to (1 - gamma) * current + gamma * candidate.
  void step(double gamma) {
    if (gamma >= 1.0) {
      perms_.clear();
      stored_.clear();
      index_.clear();
      scale_ = 1.0;
      add_weight(candidate_perm_, 1.0);
      std::copy(candidate_image_.begin(), candidate_image_.end(), image_.begin());
      return;
    }
    scale_ *= 1.0 - gamma;
    if (scale_ < 1e-100) rescale();
    add_weight(candidate_perm_, gamma / scale_);
    for (std::size_t j = 0; j < image_.size(); ++j) {
      image_[j] = (1.0 - gamma) * image_[j] + gamma * candidate_image_[j];
    }
  }

  BirkhoffVariable finish() {
    std::vector<Atom> atoms;
    double total = 0.0;
    for (std::size_t k = 0; k < perms_.size(); ++k) {
      const double weight = stored_[k] * scale_;
      if (weight < kAtomPruneWeight) continue;
      atoms.push_back({weight, Permutation(perms_[k])});
      total += weight;
    }
    for (Atom& atom : atoms) atom.weight /= total;
    return BirkhoffVariable(nu_, std::move(atoms));
  }

 private:
  static std::string key_of(std::span<const int> perm) {
    return std::string(reinterpret_cast<const char*>(perm.data()),
                       perm.size() * sizeof(int));
  }

  void add_weight(std::span<const int> perm, double stored) {
    auto [it, inserted] = index_.try_emplace(key_of(perm), perms_.size());
    if (inserted) {
      perms_.emplace_back(perm.begin(), perm.end());
      stored_.push_back(stored);
    } else {
      stored_[it->second] += stored;
    }
  }

  void remove_atom(std::size_t k) {
    index_.erase(key_of(perms_[k]));
    if (k + 1 != perms_.size()) {
      perms_[k] = std::move(perms_.back());
      stored_[k] = stored_.back();
      index_[key_of(perms_[k])] = k;
    }
    perms_.pop_back();
    stored_.pop_back();
  }

  void rescale() {
    for (double& w : stored_) w *= scale_;
    scale_ = 1.0;
  }

  MonotoneVertex nu_;
  std::size_t offset_;
  std::vector<double> image_;
  std::vector<std::vector<int>> perms_;
  std::vector<double> stored_;
  std::unordered_map<std::string, std::size_t> index_;
  double scale_ = 1.0;

  std::vector<int> candidate_perm_;
  std::vector<double> candidate_image_;
  std::vector<std::size_t> order_;
  std::size_t away_ = 0;
  std::vector<double> away_image_;
};

std::vector<BlockState> make_blocks(const AggregateFlexibility& agg,
                                    WindowSet windows) {
  std::vector<BlockState> blocks;
  if (windows == WindowSet::kOccupied) {
    for (const Block& block : agg.blocks()) blocks.emplace_back(block.nu);
    return blocks;
  }
  const int n = agg.horizon().steps();
  blocks.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n + 1) / 2);
  for (int a = 1; a <= n; ++a) {
    for (int d = a + 1; d <= n + 1; ++d) {
      const Window w{a, d};
      const Block* block = agg.find(w);
      blocks.emplace_back(block != nullptr ? block->nu : MonotoneVertex::zeros(w));
    }
  }
  return blocks;
}

void sum_images(std::span<const BlockState> blocks, std::vector<double>& x) {
  std::fill(x.begin(), x.end(), 0.0);
  for (const BlockState& block : blocks) {
    const auto image = block.image();
    for (std::size_t j = 0; j < image.size(); ++j) x[block.offset() + j] += image[j];
  }
}

// Runs the LMO on every block and returns s = sum of candidate images.
void joint_lmo(std::span<BlockState> blocks, std::span<const double> grad,
               std::vector<double>& s) {
  std::fill(s.begin(), s.end(), 0.0);
  for (BlockState& block : blocks) {
    block.run_lmo(grad);
    const auto image = block.candidate_image();
    for (std::size_t j = 0; j < image.size(); ++j) s[block.offset() + j] += image[j];
  }
}

double dot_difference(std::span<const double> g, std::span<const double> x,
                      std::span<const double> s) {
  double value = 0.0;
  for (std::size_t t = 0; t < g.size(); ++t) value += g[t] * (x[t] - s[t]);
  return value;
}

// One exact pairwise step per block, in block order, each against the current
// gradient. A block's step moves at most the weight of its away atom.
void pairwise_sweep(const Objective& objective, std::span<BlockState> blocks,
                    std::vector<double>& x, std::vector<double>& direction) {
  std::fill(direction.begin(), direction.end(), 0.0);
  for (BlockState& block : blocks) {
    if (block.rigid()) continue;
    const std::vector<double> grad = gradient(objective, x);
    block.run_lmo(grad);
    const double weight = block.run_away(grad);
    const auto to = block.candidate_image();
    const auto from = block.away_image();
    const std::size_t offset = block.offset();
    double slope = 0.0;
    for (std::size_t j = 0; j < to.size(); ++j) {
      direction[offset + j] = to[j] - from[j];
      slope += grad[offset + j] * direction[offset + j];
    }
    if (slope < 0.0) {
      const double curvature = objective.curvature(direction);
      const double wanted = curvature > 0.0 ? -slope / (2.0 * curvature) : weight;
      const bool drop = wanted >= weight;
      const double mass = drop ? weight : wanted;
      block.pairwise_step(mass, drop);
      for (std::size_t j = 0; j < to.size(); ++j) {
        x[offset + j] += mass * direction[offset + j];
      }
    }
    std::fill(direction.begin() + static_cast<std::ptrdiff_t>(offset),
              direction.begin() + static_cast<std::ptrdiff_t>(offset + to.size()),
              0.0);
  }
}

}  // namespace

SolverSolution solve(const AggregateFlexibility& agg, const Objective& objective,
                     const SolverOptions& options) {
  const TimeHorizon horizon = agg.horizon();
  const auto n = static_cast<std::size_t>(horizon.steps());
  if (objective.size() != n) {
    throw Error(ErrorCode::kDimensionMismatch,
                "objective has length " + std::to_string(objective.size()) +
                    " but the horizon has " + std::to_string(n) + " steps");
  }
  if (options.max_iters < 0 || !(options.gap_tol >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "invalid solver options");
  }

  std::vector<BlockState> blocks = make_blocks(agg, options.windows);
  std::vector<double> x(n), s(n), direction(n);
  sum_images(blocks, x);

  const bool linear = objective.is_linear();
  const bool pairwise = !linear &&
                        options.direction == Direction::kPairwise &&
                        options.step_rule == StepRule::kExactLineSearch;
  SolverSolution solution;
  solution.horizon = horizon;

  for (int k = 0;; ++k) {
    const std::vector<double> grad = gradient(objective, x);
    joint_lmo(blocks, grad, s);
    const double gap = dot_difference(grad, x, s);
    const double f = objective.value(x);
    if (!std::isfinite(gap) || !std::isfinite(f)) {
      throw Error(ErrorCode::kSolverFailure,
                  "non-finite objective or gap at iteration " + std::to_string(k));
    }
    // A linear objective always takes its single unit step to the LMO vertex.
    const bool must_step = linear && k == 0;
    if (!must_step && gap <= options.gap_tol * std::max(1.0, std::abs(f))) {
      solution.converged = true;
      break;
    }
    if (k >= options.max_iters) break;

    if (pairwise) {
      pairwise_sweep(objective, blocks, x, direction);
      ++solution.iterations;
      continue;
    }

    double gamma = 1.0;
    if (!linear) {
      if (options.step_rule == StepRule::kOpenLoop) {
        gamma = 2.0 / (k + 2.0);
      } else {
        for (std::size_t t = 0; t < n; ++t) direction[t] = s[t] - x[t];
        const double curvature = objective.curvature(direction);
        gamma = curvature > 0.0 ? std::clamp(gap / (2.0 * curvature), 0.0, 1.0)
                                : 1.0;
      }
    }
    for (BlockState& block : blocks) block.step(gamma);
    sum_images(blocks, x);
    ++solution.iterations;
  }

  solution.variables.reserve(blocks.size());
  for (BlockState& block : blocks) solution.variables.push_back(block.finish());

  // Report on the point the atoms actually represent.
  solution.x_star.assign(n, 0.0);
  for (const BirkhoffVariable& v : solution.variables) {
    const auto image = v.image();
    const auto offset = static_cast<std::size_t>(v.window().offset());
    for (std::size_t j = 0; j < image.size(); ++j) solution.x_star[offset + j] += image[j];
  }
  const std::vector<double> grad = gradient(objective, solution.x_star);
  joint_lmo(blocks, grad, s);
  solution.fw_gap = std::max(0.0, dot_difference(grad, solution.x_star, s));
  solution.objective_value = objective.value(solution.x_star);
  return solution;
}

}  // namespace flexagg
