#pragma once

#include <span>
#include <vector>

#include "flexagg/fleet.hpp"

// Brute-force references for the aggregation and optimisation routines. Only
// the request types are shared with the rest of the library; vertex
// generation, Minkowski summation and linear minimisation are redone here by
// enumeration.
namespace flexagg::oracle {

// Candidate extreme points of the aggregate set: every cross-population sum
// of individual vertices, deduplicated.
struct VertexCloud {
  std::vector<std::vector<double>> points;
};

// Largest allowed product over EVs of p_i!.
inline constexpr double kMaxCloudProduct = 1e6;

// Throws kTooLarge when the product of p_i! exceeds kMaxCloudProduct.
VertexCloud brute_force_cloud(std::span<const EvRequest> fleet,
                              TimeHorizon horizon);

// max over points of <point, y>. Throws kEmptyCloud for an empty cloud.
double cloud_support(const VertexCloud& cloud, std::span<const double> y);

struct GreedyResult {
  std::vector<double> profile;  // length n
  double cost = 0.0;
};

// Fills the cheapest in-window steps at full power and puts the remainder in
// the next cheapest one. Equal prices resolve to the earlier step.
GreedyResult greedy_linear_oracle(const EvRequest& request,
                                  std::span<const double> price);

}  // namespace flexagg::oracle
