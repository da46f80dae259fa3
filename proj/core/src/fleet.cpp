#include "flexagg/fleet.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "flexagg/random.hpp"

namespace flexagg {

TimeHorizon::TimeHorizon(int steps) : steps_(steps) {
  if (steps < 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "time horizon needs at least one step, got " +
                    std::to_string(steps));
  }
}

void check_window(Window w, TimeHorizon horizon) {
  if (!w.fits(horizon)) {
    std::ostringstream msg;
    msg << "window (" << w.arrival << ", " << w.departure
        << ") must satisfy 1 <= a < d <= " << horizon.steps() + 1;
    throw Error(ErrorCode::kBadWindow, msg.str());
  }
}

ValidatedRequest validate(const EvRequest& request, TimeHorizon horizon) {
  check_window(request.window(), horizon);
  if (!(request.power > 0.0) || !std::isfinite(request.power)) {
    throw Error(ErrorCode::kNonpositivePower,
                "EV '" + request.id + "' has power " +
                    std::to_string(request.power));
  }
  const double capacity = request.active_steps() * request.power;
  if (!(request.energy >= 0.0) || !(request.energy <= capacity)) {
    std::ostringstream msg;
    msg << "EV '" << request.id << "' needs energy " << request.energy
        << " but can draw at most " << capacity;
    throw Error(ErrorCode::kInfeasibleRequest, msg.str());
  }
  return {request, request.energy == capacity};
}

MonotoneVertex::MonotoneVertex(Window window, std::vector<double> values)
    : window_(window), values_(std::move(values)) {
  if (values_.size() != static_cast<std::size_t>(window_.length())) {
    throw Error(ErrorCode::kLengthMismatch,
                "monotone vertex has " + std::to_string(values_.size()) +
                    " entries for a window of length " +
                    std::to_string(window_.length()));
  }
  for (std::size_t j = 0; j < values_.size(); ++j) {
    if (!(values_[j] >= 0.0)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "monotone vertex entries must be nonnegative");
    }
    if (j > 0 && values_[j] > values_[j - 1]) {
      throw Error(ErrorCode::kInvalidArgument,
                  "monotone vertex entries must be nonincreasing");
    }
  }
}

MonotoneVertex MonotoneVertex::zeros(Window window) {
  return MonotoneVertex(
      window, std::vector<double>(static_cast<std::size_t>(window.length())));
}

double MonotoneVertex::sum() const noexcept {
  return std::accumulate(values_.begin(), values_.end(), 0.0);
}

MonotoneVertex monotone_vertex(const EvRequest& request) {
  const int p = request.active_steps();
  const double m = request.power;
  const double ratio = request.energy / m + kQuotientSlack;
  const int q = static_cast<int>(std::clamp(std::floor(ratio), 0.0,
                                            static_cast<double>(p)));
  std::vector<double> values(static_cast<std::size_t>(p), 0.0);
  std::fill_n(values.begin(), q, m);
  if (q < p) {
    values[static_cast<std::size_t>(q)] =
        std::clamp(request.energy - q * m, 0.0, m);
  }
  return MonotoneVertex(request.window(), std::move(values));
}

std::vector<Block> group_and_accumulate(std::span<const EvRequest> fleet) {
  std::map<Window, std::pair<std::vector<double>, std::vector<std::string>>>
      groups;
  for (const EvRequest& ev : fleet) {
    const MonotoneVertex v = monotone_vertex(ev);
    auto& [sum, members] = groups[ev.window()];
    if (sum.empty()) sum.assign(v.size(), 0.0);
    for (std::size_t j = 0; j < v.size(); ++j) sum[j] += v[j];
    members.push_back(ev.id);
  }
  std::vector<Block> blocks;
  blocks.reserve(groups.size());
  for (auto& [window, group] : groups) {
    blocks.push_back(
        {MonotoneVertex(window, std::move(group.first)), std::move(group.second)});
  }
  return blocks;
}

std::vector<EvRequest> sample_fleet(std::uint64_t seed, int count,
                                    TimeHorizon horizon) {
  if (count < 1) {
    throw Error(ErrorCode::kInvalidArgument, "fleet size must be positive");
  }
  const int n = horizon.steps();
  if (n < 2) {
    throw Error(ErrorCode::kInvalidArgument,
                "sampling needs a horizon of at least two steps");
  }
  const std::uint64_t pairs =
      static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(n + 1) / 2;

  Rng rng(seed);
  std::vector<EvRequest> fleet;
  fleet.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    // Pairs are enumerated arrival-major: a=1 has n choices of d, a=2 has n-1.
    std::uint64_t k = uniform_index(rng, pairs);
    int a = 1;
    while (k >= static_cast<std::uint64_t>(n + 1 - a)) {
      k -= static_cast<std::uint64_t>(n + 1 - a);
      ++a;
    }
    const int d = a + 1 + static_cast<int>(k);

    const double m = 0.5 + 2.5 * uniform_unit(rng);
    const double capacity = (d - a) * m;
    double energy = 0.0;
    // Keep clear of both ends so the request is strictly flexible.
    do {
      energy = capacity * uniform_unit(rng);
    } while (energy <= 1e-9 * capacity || energy >= (1.0 - 1e-9) * capacity);

    fleet.push_back({"ev" + std::to_string(i + 1), energy, a, d, m});
  }
  return fleet;
}

}  // namespace flexagg
