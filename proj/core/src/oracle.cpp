#include "flexagg/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace flexagg::oracle {
namespace {

constexpr double kDedupEps = 1e-12;

// The distinct vertices of {0 <= u <= m, sum u = E} on p coordinates: q
// coordinates at m, one at the remainder, the rest at zero, in every
// arrangement.
std::vector<std::vector<double>> individual_vertices(const EvRequest& ev) {
  const int p = ev.active_steps();
  const double m = ev.power;
  const int q = std::min(p, static_cast<int>(std::floor(ev.energy / m + 1e-12)));
  std::vector<double> base(static_cast<std::size_t>(p), 0.0);
  for (int j = 0; j < q; ++j) base[static_cast<std::size_t>(j)] = m;
  if (q < p) base[static_cast<std::size_t>(q)] = std::clamp(ev.energy - q * m, 0.0, m);

  std::sort(base.begin(), base.end());
  std::vector<std::vector<double>> vertices;
  do {
    vertices.push_back(base);
  } while (std::next_permutation(base.begin(), base.end()));
  return vertices;
}

bool nearly_equal(const std::vector<double>& a, const std::vector<double>& b) {
  for (std::size_t t = 0; t < a.size(); ++t) {
    if (std::abs(a[t] - b[t]) > kDedupEps) return false;
  }
  return true;
}

void dedupe(std::vector<std::vector<double>>& points) {
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end(), nearly_equal),
               points.end());
}

}  // namespace

VertexCloud brute_force_cloud(std::span<const EvRequest> fleet,
                              TimeHorizon horizon) {
  double product = 1.0;
  for (const EvRequest& ev : fleet) {
    for (int k = 2; k <= ev.active_steps(); ++k) product *= k;
    if (product > kMaxCloudProduct) {
      throw Error(ErrorCode::kTooLarge,
                  "brute-force cloud would enumerate more than 1e6 sums");
    }
  }

  const auto n = static_cast<std::size_t>(horizon.steps());
  VertexCloud cloud;
  cloud.points.assign(1, std::vector<double>(n, 0.0));
  for (const EvRequest& ev : fleet) {
    check_window(ev.window(), horizon);
    const auto offset = static_cast<std::size_t>(ev.arrival - 1);
    const auto vertices = individual_vertices(ev);
    std::vector<std::vector<double>> next;
    next.reserve(cloud.points.size() * vertices.size());
    for (const auto& point : cloud.points) {
      for (const auto& vertex : vertices) {
        std::vector<double> sum = point;
        for (std::size_t j = 0; j < vertex.size(); ++j) sum[offset + j] += vertex[j];
        next.push_back(std::move(sum));
      }
    }
    dedupe(next);
    cloud.points = std::move(next);
  }
  return cloud;
}

double cloud_support(const VertexCloud& cloud, std::span<const double> y) {
  if (cloud.points.empty()) {
    throw Error(ErrorCode::kEmptyCloud, "support of an empty cloud");
  }
  double best = -INFINITY;
  for (const auto& point : cloud.points) {
    if (point.size() != y.size()) {
      throw Error(ErrorCode::kLengthMismatch, "direction length mismatch");
    }
    best = std::max(best, std::inner_product(point.begin(), point.end(),
                                             y.begin(), 0.0));
  }
  return best;
}

GreedyResult greedy_linear_oracle(const EvRequest& request,
                                  std::span<const double> price) {
  std::vector<int> steps;
  for (int t = request.arrival; t < request.departure; ++t) steps.push_back(t);
  if (price.size() < static_cast<std::size_t>(request.departure - 1)) {
    throw Error(ErrorCode::kLengthMismatch, "price does not cover the window");
  }
  std::stable_sort(steps.begin(), steps.end(), [&](int l, int r) {
    return price[static_cast<std::size_t>(l - 1)] <
           price[static_cast<std::size_t>(r - 1)];
  });

  GreedyResult result;
  result.profile.assign(price.size(), 0.0);
  double remaining = request.energy;
  for (int t : steps) {
    const double draw = std::min(request.power, std::max(0.0, remaining));
    result.profile[static_cast<std::size_t>(t - 1)] = draw;
    remaining -= draw;
  }
  for (std::size_t t = 0; t < price.size(); ++t) {
    result.cost += price[t] * result.profile[t];
  }
  return result;
}

}  // namespace flexagg::oracle
