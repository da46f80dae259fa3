#include "flexagg/fleet.hpp"

#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "test_support.hpp"

namespace flexagg {
namespace {

const TimeHorizon kFour(4);

EvRequest request(double energy, int a, int d, double m, std::string id = "ev") {
  return {std::move(id), energy, a, d, m};
}

TEST(Validate, SingletonIsAcceptedAndFlagged) {
  const auto result = validate(request(6, 1, 4, 2), kFour);
  EXPECT_TRUE(result.zero_flexibility);
  EXPECT_EQ(result.request.energy, 6);
}

TEST(Validate, EnergyAboveCapacityIsInfeasible) {
  try {
    validate(request(7, 1, 4, 2), kFour);
    FAIL() << "expected InfeasibleRequest";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInfeasibleRequest);
  }
}

TEST(Validate, InteriorRequestIsFlexible) {
  const auto result = validate(request(3, 2, 4, 2), kFour);
  EXPECT_FALSE(result.zero_flexibility);
}

TEST(Validate, ErrorCodes) {
  auto code_of = [](const EvRequest& r, TimeHorizon h) {
    try {
      validate(r, h);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kInvalidArgument;
  };
  EXPECT_EQ(code_of(request(1, 3, 3, 2), kFour), ErrorCode::kBadWindow);
  EXPECT_EQ(code_of(request(1, 0, 3, 2), kFour), ErrorCode::kBadWindow);
  EXPECT_EQ(code_of(request(1, 2, 6, 2), kFour), ErrorCode::kBadWindow);
  EXPECT_EQ(code_of(request(1, 1, 2, 0), kFour), ErrorCode::kNonpositivePower);
  EXPECT_EQ(code_of(request(1, 1, 2, -1), kFour), ErrorCode::kNonpositivePower);
  EXPECT_EQ(code_of(request(-0.5, 1, 2, 1), kFour), ErrorCode::kInfeasibleRequest);
  // d = n + 1 is the last valid departure.
  EXPECT_NO_THROW(validate(request(1, 4, 5, 2), kFour));
  EXPECT_NO_THROW(validate(request(0, 1, 2, 2), kFour));
}

TEST(MonotoneVertexOp, Examples) {
  auto values = [](const EvRequest& r) {
    const auto v = monotone_vertex(r);
    return std::vector<double>(v.values().begin(), v.values().end());
  };
  EXPECT_EQ(values(request(5, 1, 5, 2)), (std::vector<double>{2, 2, 1, 0}));
  EXPECT_EQ(values(request(6, 1, 4, 2)), (std::vector<double>{2, 2, 2}));
  EXPECT_EQ(values(request(0, 1, 3, 2)), (std::vector<double>{0, 0}));
}

TEST(MonotoneVertexOp, InexactMultipleDoesNotLoseAStep) {
  // 0.3 / 0.1 evaluates to 2.9999999999999996.
  const auto v = monotone_vertex(request(0.3, 1, 5, 0.1));
  EXPECT_EQ(v[0], 0.1);
  EXPECT_EQ(v[1], 0.1);
  EXPECT_EQ(v[2], 0.1);
  EXPECT_EQ(v[3], 0.0);
}

TEST(MonotoneVertexOp, RandomRequestsSatisfyInvariants) {
  Rng rng(7);
  const TimeHorizon horizon(30);
  for (int trial = 0; trial < 2000; ++trial) {
    const EvRequest r = testing::random_request(rng, horizon, trial);
    const MonotoneVertex v = monotone_vertex(r);
    ASSERT_EQ(v.size(), static_cast<std::size_t>(r.active_steps()));
    EXPECT_NEAR(v.sum(), r.energy, 1e-12 * std::max(1.0, r.energy));
    int fractional = 0;
    for (std::size_t j = 0; j < v.size(); ++j) {
      EXPECT_GE(v[j], 0.0);
      EXPECT_LE(v[j], r.power);
      if (j > 0) EXPECT_LE(v[j], v[j - 1]);
      if (v[j] > 0.0 && v[j] < r.power) ++fractional;
    }
    EXPECT_LE(fractional, 1);
  }
}

TEST(MonotoneVertexType, RejectsBadValues) {
  EXPECT_THROW(MonotoneVertex({1, 3}, {1.0}), Error);
  EXPECT_THROW(MonotoneVertex({1, 3}, {1.0, 2.0}), Error);
  EXPECT_THROW(MonotoneVertex({1, 3}, {1.0, -1.0}), Error);
}

TEST(GroupAndAccumulate, SumsVerticesWithinAWindow) {
  // v1 = (2, 1, 0) and v2 = (3, 3, 1).
  const std::vector<EvRequest> fleet = {request(3, 1, 4, 2, "a"),
                                        request(7, 1, 4, 3, "b")};
  const auto blocks = group_and_accumulate(fleet);
  ASSERT_EQ(blocks.size(), 1u);
  EXPECT_EQ(blocks[0].nu, MonotoneVertex({1, 4}, {5, 4, 1}));
  EXPECT_EQ(blocks[0].members, (std::vector<std::string>{"a", "b"}));
}

TEST(GroupAndAccumulate, SingleEvAndSeparateWindows) {
  const std::vector<EvRequest> one = {request(3, 1, 4, 2)};
  EXPECT_EQ(group_and_accumulate(one)[0].nu, monotone_vertex(one[0]));

  const std::vector<EvRequest> two = {request(3, 1, 4, 2, "a"),
                                      request(3, 2, 4, 2, "b")};
  const auto blocks = group_and_accumulate(two);
  ASSERT_EQ(blocks.size(), 2u);
  EXPECT_EQ(blocks[0].window(), (Window{1, 4}));
  EXPECT_EQ(blocks[1].window(), (Window{2, 4}));
  EXPECT_EQ(blocks[1].nu, MonotoneVertex({2, 4}, {2, 1}));
}

TEST(GroupAndAccumulate, EnergyIsConserved) {
  Rng rng(11);
  const TimeHorizon horizon(12);
  for (int trial = 0; trial < 50; ++trial) {
    const auto fleet = testing::random_fleet(rng, 40, horizon);
    double expected = 0.0;
    for (const auto& ev : fleet) expected += ev.energy;
    double total = 0.0;
    std::size_t members = 0;
    for (const Block& block : group_and_accumulate(fleet)) {
      total += block.nu.sum();
      members += block.members.size();
      for (std::size_t j = 1; j < block.nu.size(); ++j) {
        EXPECT_LE(block.nu[j], block.nu[j - 1]);
      }
    }
    EXPECT_NEAR(total, expected, 1e-10 * expected);
    EXPECT_EQ(members, fleet.size());
  }
}

TEST(SampleFleet, ProducesStrictlyFlexibleValidRequests) {
  const TimeHorizon horizon(48);
  const auto fleet = sample_fleet(1, 100, horizon);
  ASSERT_EQ(fleet.size(), 100u);
  for (const EvRequest& ev : fleet) {
    const auto checked = validate(ev, horizon);
    EXPECT_FALSE(checked.zero_flexibility);
    EXPECT_GT(ev.energy, 0.0);
    EXPECT_LT(ev.energy, ev.active_steps() * ev.power);
    EXPECT_GE(ev.power, 0.5);
    EXPECT_LE(ev.power, 3.0);
  }
}

TEST(SampleFleet, IsByteReproducible) {
  const TimeHorizon horizon(48);
  std::ostringstream first, second, other;
  write_fleet_csv(first, sample_fleet(5, 300, horizon));
  write_fleet_csv(second, sample_fleet(5, 300, horizon));
  write_fleet_csv(other, sample_fleet(6, 300, horizon));
  EXPECT_EQ(first.str(), second.str());
  EXPECT_NE(first.str(), other.str());
}

TEST(SampleFleet, SmallestHorizonUsesOnlyValidWindows) {
  const auto fleet = sample_fleet(2, 1, TimeHorizon(2));
  ASSERT_EQ(fleet.size(), 1u);
  const std::set<Window> allowed = {{1, 2}, {1, 3}, {2, 3}};
  EXPECT_TRUE(allowed.contains(fleet[0].window()));

  std::set<Window> seen;
  for (const auto& ev : sample_fleet(3, 300, TimeHorizon(2))) seen.insert(ev.window());
  EXPECT_EQ(seen, allowed);
}

TEST(SampleFleet, RejectsDegenerateArguments) {
  EXPECT_THROW(sample_fleet(1, 0, TimeHorizon(4)), Error);
  EXPECT_THROW(sample_fleet(1, 5, TimeHorizon(1)), Error);
}

TEST(LoadFleet, ParsesCsvRow) {
  std::istringstream in("id,arrival,departure,energy,power\nev7,2,5,3.0,1.5\n");
  const auto loaded = parse_fleet_csv(in, TimeHorizon(6));
  ASSERT_EQ(loaded.requests.size(), 1u);
  EXPECT_EQ(loaded.requests[0], request(3.0, 2, 5, 1.5, "ev7"));
  EXPECT_TRUE(loaded.warnings.empty());
}

TEST(LoadFleet, ReportsBadWindowWithRow) {
  std::istringstream in(
      "id,arrival,departure,energy,power\nok,1,3,1,1\nbad,2,1,1,1\n");
  try {
    parse_fleet_csv(in, TimeHorizon(6));
    FAIL() << "expected a load error";
  } catch (const FleetLoadError& e) {
    ASSERT_EQ(e.issues().size(), 1u);
    EXPECT_EQ(e.issues()[0].row, 2u);
    EXPECT_EQ(e.issues()[0].code, ErrorCode::kBadWindow);
    EXPECT_EQ(e.code(), ErrorCode::kBadWindow);
  }
}

TEST(LoadFleet, CollectsEveryBadRow) {
  std::istringstream in(
      "id,arrival,departure,energy,power\n"
      "a,1,3,9,1\n"
      "b,1,x,1,1\n"
      "c,1,3,1\n"
      "d,1,3,1,1\n");
  try {
    parse_fleet_csv(in, TimeHorizon(6));
    FAIL() << "expected a load error";
  } catch (const FleetLoadError& e) {
    ASSERT_EQ(e.issues().size(), 3u);
    EXPECT_EQ(e.issues()[0].code, ErrorCode::kInfeasibleRequest);
    EXPECT_EQ(e.issues()[0].row, 1u);
    EXPECT_EQ(e.issues()[1].code, ErrorCode::kParseError);
    EXPECT_EQ(e.issues()[2].row, 3u);
  }
}

TEST(LoadFleet, EmptyInputGivesEmptyFleetWithWarning) {
  std::istringstream empty("");
  const auto loaded = parse_fleet_csv(empty, TimeHorizon(6));
  EXPECT_TRUE(loaded.requests.empty());
  EXPECT_EQ(loaded.warnings.size(), 1u);

  std::istringstream header_only("id,arrival,departure,energy,power\n");
  EXPECT_TRUE(parse_fleet_csv(header_only, TimeHorizon(6)).requests.empty());
}

TEST(LoadFleet, WrongHeaderIsAParseError) {
  std::istringstream in("name,a,d,E,m\nev,1,2,1,1\n");
  try {
    parse_fleet_csv(in, TimeHorizon(6));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParseError);
  }
}

TEST(LoadFleet, ParsesJson) {
  std::istringstream in(
      R"([{"id": "ev7", "arrival": 2, "departure": 5, "energy": 3.0, "power": 1.5}])");
  const auto loaded = parse_fleet_json(in, TimeHorizon(6));
  ASSERT_EQ(loaded.requests.size(), 1u);
  EXPECT_EQ(loaded.requests[0], request(3.0, 2, 5, 1.5, "ev7"));

  std::istringstream bad(R"([{"id": "x", "arrival": 2}])");
  EXPECT_THROW(parse_fleet_json(bad, TimeHorizon(6)), FleetLoadError);
}

TEST(LoadFleet, CsvRoundTripsSampledFleet) {
  const TimeHorizon horizon(24);
  const auto fleet = sample_fleet(9, 50, horizon);
  std::stringstream buffer;
  write_fleet_csv(buffer, fleet);
  EXPECT_EQ(parse_fleet_csv(buffer, horizon).requests, fleet);
}

TEST(LoadFleet, MissingFileIsAnIoError) {
  try {
    load_fleet("/nonexistent/fleet.csv", FleetFormat::kCsv, TimeHorizon(4));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIoError);
  }
}

}  // namespace
}  // namespace flexagg
