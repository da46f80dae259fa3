#include "flexagg/disaggregate.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "flexagg/parallel.hpp"

namespace flexagg {

Schedule schedule(const SolverSolution& solution,
                  std::span<const EvRequest> fleet,
                  const AggregateFlexibility& agg) {
  const TimeHorizon horizon = agg.horizon();
  if (solution.horizon != horizon) {
    throw Error(ErrorCode::kFleetMismatch,
                "solution and aggregate use different horizons");
  }
  const auto n = static_cast<std::size_t>(horizon.steps());

  // One dense matrix per window that actually holds EVs.
  std::map<Window, std::vector<double>> matrices;
  for (const EvRequest& ev : fleet) {
    const Window w = ev.window();
    if (matrices.contains(w)) continue;
    const BirkhoffVariable* variable = solution.find(w);
    if (variable == nullptr || agg.find(w) == nullptr) {
      throw Error(ErrorCode::kFleetMismatch,
                  "EV '" + ev.id + "' uses window (" + std::to_string(w.arrival) +
                      ", " + std::to_string(w.departure) +
                      ") which has no block in the solution");
    }
    matrices.emplace(w, variable->implied_matrix());
  }

  Schedule sched;
  sched.profiles.resize(fleet.size());
  parallel_chunks(fleet.size(), 256, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const EvRequest& ev = fleet[i];
      const MonotoneVertex v = monotone_vertex(ev);
      const std::vector<double>& a = matrices.at(ev.window());
      const std::size_t p = v.size();
      const auto offset = static_cast<std::size_t>(ev.window().offset());
      std::vector<double> profile(n, 0.0);
      for (std::size_t row = 0; row < p; ++row) {
        double value = 0.0;
        for (std::size_t col = 0; col < p; ++col) value += a[row * p + col] * v[col];
        profile[offset + row] = value;
      }
      sched.profiles[i] = {ev.id, std::move(profile)};
    }
  });

  sched.aggregate.assign(n, 0.0);
  for (const EvProfile& ev : sched.profiles) {
    for (std::size_t t = 0; t < n; ++t) sched.aggregate[t] += ev.profile[t];
  }
  return sched;
}

VerifyReport verify(const Schedule& sched, std::span<const double> x_star,
                    std::span<const EvRequest> fleet,
                    const VerifyOptions& options) {
  VerifyReport report;
  const std::size_t n = x_star.size();

  std::vector<double> total(n, 0.0);
  bool shapes_ok = sched.profiles.size() == fleet.size();
  for (const EvProfile& ev : sched.profiles) {
    if (ev.profile.size() != n) {
      shapes_ok = false;
      continue;
    }
    for (std::size_t t = 0; t < n; ++t) total[t] += ev.profile[t];
  }
  for (std::size_t t = 0; t < n; ++t) {
    report.aggregate_residual =
        std::max(report.aggregate_residual, std::abs(total[t] - x_star[t]));
  }
  report.tracking_ok =
      shapes_ok && report.aggregate_residual <= options.aggregate_tol;

  const std::size_t count = std::min(sched.profiles.size(), fleet.size());
  for (std::size_t i = 0; i < count; ++i) {
    const EvRequest& ev = fleet[i];
    const EvProfile& row = sched.profiles[i];
    if (row.id != ev.id || row.profile.size() != n) {
      report.violations.push_back({ev.id, "shape", 0, 0.0});
      continue;
    }
    const double tol = options.ev_tol * std::max(1.0, ev.energy);
    double energy = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      const double u = row.profile[t];
      const int step = static_cast<int>(t) + 1;
      if (!ev.window().contains(step)) {
        if (u != 0.0) report.violations.push_back({ev.id, "outside-window", step, u});
        continue;
      }
      if (u < -tol) report.violations.push_back({ev.id, "below-zero", step, u});
      if (u > ev.power + tol) {
        report.violations.push_back({ev.id, "above-power", step, u - ev.power});
      }
      energy += u;
    }
    if (!(std::abs(energy - ev.energy) <= tol)) {
      report.violations.push_back({ev.id, "energy", 0, energy - ev.energy});
    }
  }
  report.feasibility_ok = shapes_ok && report.violations.empty();
  return report;
}

Schedule clamp_for_output(Schedule sched, std::span<const EvRequest> fleet) {
  const std::size_t count = std::min(sched.profiles.size(), fleet.size());
  for (std::size_t i = 0; i < count; ++i) {
    auto& profile = sched.profiles[i].profile;
    const Window w = fleet[i].window();
    const auto first = profile.begin() + w.offset();
    const auto last = first + w.length();
    double removed = 0.0;
    for (auto it = first; it != last; ++it) {
      if (*it < 0.0) {
        removed += *it;
        *it = 0.0;
      }
    }
    if (removed != 0.0) *std::max_element(first, last) += removed;
  }
  std::fill(sched.aggregate.begin(), sched.aggregate.end(), 0.0);
  for (const EvProfile& ev : sched.profiles) {
    for (std::size_t t = 0; t < sched.aggregate.size() && t < ev.profile.size(); ++t) {
      sched.aggregate[t] += ev.profile[t];
    }
  }
  return sched;
}

}  // namespace flexagg
