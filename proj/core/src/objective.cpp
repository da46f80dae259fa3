#include <algorithm>
#include <numeric>

#include "flexagg/solver.hpp"
#include "lmo.hpp"

namespace flexagg {
namespace {

void require_same_length(std::size_t expected, std::size_t actual,
                         const char* what) {
  if (expected != actual) {
    throw Error(ErrorCode::kDimensionMismatch,
                std::string(what) + " has length " + std::to_string(actual) +
                    ", expected " + std::to_string(expected));
  }
}

}  // namespace

Objective::Objective(Variant cost) : cost_(std::move(cost)) {
  if (const auto* quad = std::get_if<QuadraticPriceCost>(&cost_)) {
    require_same_length(quad->price.size(), quad->external_demand.size(),
                        "external demand");
    for (double p : quad->price) {
      if (!(p >= 0.0)) {
        throw Error(ErrorCode::kInvalidArgument,
                    "quadratic price must be nonnegative to stay convex");
      }
    }
  }
}

Objective Objective::linear(std::vector<double> price) {
  return Objective(LinearCost{std::move(price)});
}

Objective Objective::quadratic(std::vector<double> price,
                               std::vector<double> external_demand) {
  return Objective(
      QuadraticPriceCost{std::move(price), std::move(external_demand)});
}

Objective Objective::tracking(std::vector<double> signal) {
  return Objective(TrackingCost{std::move(signal)});
}

std::size_t Objective::size() const noexcept {
  return std::visit(
      [](const auto& cost) {
        using T = std::decay_t<decltype(cost)>;
        if constexpr (std::is_same_v<T, TrackingCost>) {
          return cost.signal.size();
        } else {
          return cost.price.size();
        }
      },
      cost_);
}

double Objective::value(std::span<const double> x) const {
  require_same_length(size(), x.size(), "profile");
  double f = 0.0;
  if (const auto* lin = std::get_if<LinearCost>(&cost_)) {
    for (std::size_t t = 0; t < x.size(); ++t) f += lin->price[t] * x[t];
  } else if (const auto* quad = std::get_if<QuadraticPriceCost>(&cost_)) {
    for (std::size_t t = 0; t < x.size(); ++t) {
      f += quad->price[t] * x[t] * (x[t] + quad->external_demand[t]);
    }
  } else {
    const auto& track = std::get<TrackingCost>(cost_);
    for (std::size_t t = 0; t < x.size(); ++t) {
      const double r = x[t] - track.signal[t];
      f += r * r;
    }
  }
  return f;
}

double Objective::curvature(std::span<const double> d) const {
  require_same_length(size(), d.size(), "direction");
  double c = 0.0;
  if (const auto* quad = std::get_if<QuadraticPriceCost>(&cost_)) {
    for (std::size_t t = 0; t < d.size(); ++t) c += quad->price[t] * d[t] * d[t];
  } else if (std::holds_alternative<TrackingCost>(cost_)) {
    for (double v : d) c += v * v;
  }
  return c;
}

std::vector<double> gradient(const Objective& objective,
                             std::span<const double> x) {
  if (x.size() != objective.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                "profile length " + std::to_string(x.size()) +
                    " does not match objective length " +
                    std::to_string(objective.size()));
  }
  std::vector<double> g(x.size());
  const auto& cost = objective.cost();
  if (const auto* lin = std::get_if<LinearCost>(&cost)) {
    g = lin->price;
  } else if (const auto* quad = std::get_if<QuadraticPriceCost>(&cost)) {
    for (std::size_t t = 0; t < x.size(); ++t) {
      g[t] = quad->price[t] * (2.0 * x[t] + quad->external_demand[t]);
    }
  } else {
    const auto& track = std::get<TrackingCost>(cost);
    for (std::size_t t = 0; t < x.size(); ++t) g[t] = 2.0 * (x[t] - track.signal[t]);
  }
  return g;
}

Permutation lmo_block(const MonotoneVertex& nu, std::span<const double> grad) {
  const Window w = nu.window();
  if (grad.size() < static_cast<std::size_t>(w.departure - 1)) {
    throw Error(ErrorCode::kLengthMismatch,
                "gradient does not cover window ending at step " +
                    std::to_string(w.departure - 1));
  }
  const auto local =
      grad.subspan(static_cast<std::size_t>(w.offset()), nu.size());
  std::vector<std::size_t> order;
  std::vector<int> perm(nu.size());
  detail::lmo_into(nu.values(), local, order, perm);
  return Permutation(std::move(perm));
}

}  // namespace flexagg
