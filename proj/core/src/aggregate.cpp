#include "flexagg/aggregate.hpp"

#include <algorithm>
#include <functional>

#include "flexagg/random.hpp"

namespace flexagg {

AggregateFlexibility::AggregateFlexibility(TimeHorizon horizon,
                                           std::vector<Block> blocks)
    : horizon_(horizon), blocks_(std::move(blocks)) {
  std::sort(blocks_.begin(), blocks_.end(),
            [](const Block& l, const Block& r) { return l.window() < r.window(); });
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    check_window(blocks_[b].window(), horizon_);
    if (b > 0 && blocks_[b].window() == blocks_[b - 1].window()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "aggregate has two blocks with window (" +
                      std::to_string(blocks_[b].window().arrival) + ", " +
                      std::to_string(blocks_[b].window().departure) + ")");
    }
    total_energy_ += blocks_[b].nu.sum();
  }
}

const Block* AggregateFlexibility::find(Window w) const {
  const auto it = std::lower_bound(
      blocks_.begin(), blocks_.end(), w,
      [](const Block& block, Window key) { return block.window() < key; });
  return it != blocks_.end() && it->window() == w ? &*it : nullptr;
}

AggregateFlexibility build(std::span<const EvRequest> fleet,
                           TimeHorizon horizon) {
  for (const EvRequest& ev : fleet) validate(ev, horizon);
  return AggregateFlexibility(horizon, group_and_accumulate(fleet));
}

std::vector<double> vertex_mu(const AggregateFlexibility& agg,
                              const Permutation& pi) {
  const TimeHorizon horizon = agg.horizon();
  if (pi.size() != horizon.steps()) {
    throw Error(ErrorCode::kLengthMismatch,
                "vertex permutation must act on the whole horizon");
  }
  std::vector<double> mu(static_cast<std::size_t>(horizon.steps()), 0.0);
  for (const Block& block : agg.blocks()) {
    const Window w = block.window();
    const Permutation local = rank_within_window(pi, w);
    for (std::size_t j = 0; j < block.nu.size(); ++j) {
      mu[static_cast<std::size_t>(w.offset()) + j] +=
          block.nu[static_cast<std::size_t>(local[j] - 1)];
    }
  }
  return mu;
}

double support_agg(const AggregateFlexibility& agg, std::span<const double> y) {
  if (y.size() != static_cast<std::size_t>(agg.horizon().steps())) {
    throw Error(ErrorCode::kLengthMismatch,
                "direction length " + std::to_string(y.size()) +
                    " does not match horizon " +
                    std::to_string(agg.horizon().steps()));
  }
  double value = 0.0;
  for (const Block& block : agg.blocks()) {
    const Window w = block.window();
    value += support(block.nu, y.subspan(static_cast<std::size_t>(w.offset()),
                                         block.nu.size()));
  }
  return value;
}

double facet_bound(const AggregateFlexibility& agg, std::span<const int> subset) {
  const int n = agg.horizon().steps();
  std::vector<bool> in_subset(static_cast<std::size_t>(n), false);
  int members = 0;
  for (int t : subset) {
    if (t < 1 || t > n) {
      throw Error(ErrorCode::kBadSubset,
                  "step " + std::to_string(t) + " outside 1.." +
                      std::to_string(n));
    }
    if (in_subset[static_cast<std::size_t>(t - 1)]) {
      throw Error(ErrorCode::kBadSubset, "step " + std::to_string(t) + " repeated");
    }
    in_subset[static_cast<std::size_t>(t - 1)] = true;
    ++members;
  }
  if (members == 0 || members == n) {
    throw Error(ErrorCode::kBadSubset,
                "subset bounds need a nonempty proper subset of the horizon");
  }
  double bound = 0.0;
  for (const Block& block : agg.blocks()) {
    const Window w = block.window();
    int overlap = 0;
    for (int t = w.arrival; t < w.departure; ++t) {
      overlap += in_subset[static_cast<std::size_t>(t - 1)] ? 1 : 0;
    }
    for (int j = 0; j < overlap; ++j) bound += block.nu[static_cast<std::size_t>(j)];
  }
  return bound;
}

double default_membership_tolerance(const AggregateFlexibility& agg) {
  return 1e-9 * std::max(1.0, agg.total_energy());
}

std::vector<double> sample_member(const AggregateFlexibility& agg,
                                  std::uint64_t seed, int atoms_per_block) {
  if (atoms_per_block < 1) {
    throw Error(ErrorCode::kInvalidArgument, "need at least one atom per block");
  }
  Rng rng(seed);
  std::vector<double> x(static_cast<std::size_t>(agg.horizon().steps()), 0.0);
  std::vector<double> image;
  for (const Block& block : agg.blocks()) {
    const auto weights =
        random_simplex_weights(rng, static_cast<std::size_t>(atoms_per_block));
    image.resize(block.nu.size());
    for (double weight : weights) {
      const auto perm = random_one_line(rng, static_cast<int>(block.nu.size()));
      apply_into(block.nu.values(), perm, image);
      for (std::size_t j = 0; j < image.size(); ++j) {
        x[static_cast<std::size_t>(block.window().offset()) + j] +=
            weight * image[j];
      }
    }
  }
  return x;
}

}  // namespace flexagg
