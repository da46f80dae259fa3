#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "flexagg/error.hpp"

namespace flexagg {

// Discrete horizon of n unit-length steps, indexed 1..n.
class TimeHorizon {
 public:
  explicit TimeHorizon(int steps);

  int steps() const noexcept { return steps_; }
  friend bool operator==(TimeHorizon, TimeHorizon) = default;

 private:
  int steps_;
};

// Arrival/departure pair. The vehicle is active on steps arrival..departure-1
// (1-based), so it covers `length()` consecutive steps.
struct Window {
  int arrival = 1;
  int departure = 2;

  int length() const noexcept { return departure - arrival; }
  // 0-based index of the first active step.
  int offset() const noexcept { return arrival - 1; }
  bool contains(int t) const noexcept { return t >= arrival && t < departure; }
  bool fits(TimeHorizon horizon) const noexcept {
    return arrival >= 1 && arrival < departure &&
           departure <= horizon.steps() + 1;
  }

  friend auto operator<=>(const Window&, const Window&) = default;
};

// Throws kBadWindow unless 1 <= a < d <= n+1.
void check_window(Window w, TimeHorizon horizon);

// One vehicle's charging requirement (E, a, d, m).
struct EvRequest {
  std::string id;
  double energy = 0.0;
  int arrival = 1;
  int departure = 2;
  double power = 1.0;

  Window window() const noexcept { return {arrival, departure}; }
  int active_steps() const noexcept { return departure - arrival; }

  friend bool operator==(const EvRequest&, const EvRequest&) = default;
};

struct ValidatedRequest {
  EvRequest request;
  // E == p*m: the flexibility set is a single point.
  bool zero_flexibility = false;
};

ValidatedRequest validate(const EvRequest& request, TimeHorizon horizon);

// The nonincreasing generator of a permutahedron living on `window`.
class MonotoneVertex {
 public:
  // Throws kLengthMismatch if values.size() != window.length() and
  // kInvalidArgument if values are negative or increase anywhere.
  MonotoneVertex(Window window, std::vector<double> values);

  static MonotoneVertex zeros(Window window);

  Window window() const noexcept { return window_; }
  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t j) const { return values_[j]; }
  double sum() const noexcept;

  friend bool operator==(const MonotoneVertex&, const MonotoneVertex&) = default;

 private:
  Window window_;
  std::vector<double> values_;
};

// Slack added to E/m before flooring so exact multiples stored inexactly do
// not lose a full-power step.
inline constexpr double kQuotientSlack = 1e-12;

// (m, ..., m, r, 0, ..., 0) with q = floor(E/m) leading m entries.
MonotoneVertex monotone_vertex(const EvRequest& request);

// EVs sharing an exact (arrival, departure) pair together with the sum of
// their monotone vertices.
struct Block {
  MonotoneVertex nu;
  std::vector<std::string> members;

  Window window() const noexcept { return nu.window(); }
};

// Partitions the fleet by window. Blocks come back sorted by window.
std::vector<Block> group_and_accumulate(std::span<const EvRequest> fleet);

// Deterministic synthetic fleet: windows uniform over all a < d pairs, power
// uniform on [0.5, 3], energy uniform on the open interval (0, p*m).
std::vector<EvRequest> sample_fleet(std::uint64_t seed, int count,
                                    TimeHorizon horizon);

enum class FleetFormat { kCsv, kJson };

struct RowIssue {
  std::size_t row = 0;  // 1-based data row (header excluded)
  ErrorCode code = ErrorCode::kParseError;
  std::string message;
};

// Raised by the loaders after every row has been examined.
class FleetLoadError : public Error {
 public:
  explicit FleetLoadError(std::vector<RowIssue> issues);

  const std::vector<RowIssue>& issues() const noexcept { return issues_; }

 private:
  std::vector<RowIssue> issues_;
};

struct LoadedFleet {
  std::vector<EvRequest> requests;
  std::vector<std::string> warnings;
};

LoadedFleet parse_fleet_csv(std::istream& in, TimeHorizon horizon);
LoadedFleet parse_fleet_json(std::istream& in, TimeHorizon horizon);
LoadedFleet load_fleet(const std::filesystem::path& path, FleetFormat format,
                       TimeHorizon horizon);
// Picks the format from the extension (.json, anything else is CSV).
FleetFormat fleet_format_for(const std::filesystem::path& path);

void write_fleet_csv(std::ostream& out, std::span<const EvRequest> fleet);

}  // namespace flexagg
