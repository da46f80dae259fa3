#include <gtest/gtest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <unistd.h>

#include "flexagg/fleet.hpp"
#include "flexagg/io.hpp"
#include "flexagg/random.hpp"

namespace flexagg {
namespace {

namespace fs = std::filesystem;

// Scratch directory per test, removed afterwards.
class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() /
           ("flexagg_cli_" + std::string(info->name()) + "_" + std::to_string(::getpid()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path path(const std::string& name) const { return dir_ / name; }

  // Exit status of `flexagg args`, with stdout and stderr captured.
  int run(const std::string& args) {
    const std::string cmd = std::string("\"") + FLEXAGG_CLI_PATH + "\" " + args + " > \"" +
                            path("stdout.txt").string() + "\" 2> \"" +
                            path("stderr.txt").string() + "\"";
    const int raw = std::system(cmd.c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  }

  std::string read(const std::string& name) const {
    std::ifstream in(path(name));
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  void write(const std::string& name, const std::string& text) const {
    std::ofstream(path(name)) << text;
  }

  void write_series(const std::string& name, const std::vector<double>& values) const {
    std::ofstream out(path(name));
    io::write_series_csv(out, values);
  }

  std::string out_dir() const { return " -o \"" + dir_.string() + "\""; }
  std::string quoted(const std::string& name) const { return "\"" + path(name).string() + "\""; }

  fs::path dir_;
};

std::size_t line_count(const std::string& text) {
  return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

TEST_F(CliTest, SampleWritesAValidFleet) {
  ASSERT_EQ(run("sample --seed 1 --k 100 --n 48" + out_dir()), 0) << read("stderr.txt");
  const auto loaded = load_fleet(path("fleet.csv"), FleetFormat::kCsv, TimeHorizon(48));
  EXPECT_EQ(loaded.requests.size(), 100u);
  EXPECT_TRUE(loaded.warnings.empty());
  for (const auto& ev : loaded.requests) EXPECT_NO_THROW(validate(ev, TimeHorizon(48)));
}

TEST_F(CliTest, SampleIsDeterministicInTheSeed) {
  ASSERT_EQ(run("sample --seed 7 --k 30 --n 12" + out_dir()), 0);
  const std::string first = read("fleet.csv");
  ASSERT_EQ(run("sample --seed 7 --k 30 --n 12" + out_dir()), 0);
  EXPECT_EQ(read("fleet.csv"), first);
  ASSERT_EQ(run("sample --seed 8 --k 30 --n 12" + out_dir()), 0);
  EXPECT_NE(read("fleet.csv"), first);
}

TEST_F(CliTest, LinearSolveOfOneEvIsTheGreedyProfile) {
  write("fleet.csv", "id,arrival,departure,energy,power\na,1,4,3,2\n");
  write_series("price.csv", {5, 1, 2});
  ASSERT_EQ(run("solve --fleet " + quoted("fleet.csv") + " --n 3 --objective linear --price " +
                quoted("price.csv") + out_dir()),
            0)
      << read("stderr.txt");
  const auto x = io::read_series_file(path("x_star.csv"), TimeHorizon(3));
  EXPECT_EQ(x, (std::vector<double>{0, 2, 1}));
  EXPECT_TRUE(fs::exists(path("solution.json")));
}

TEST_F(CliTest, TrackingASampledMemberHasSmallResidual) {
  ASSERT_EQ(run("sample --seed 3 --k 100 --n 48" + out_dir()), 0);
  ASSERT_EQ(run("track --fleet " + quoted("fleet.csv") + " --n 48 --member-seed 5" + out_dir()),
            0)
      << read("stderr.txt");
  std::istringstream csv(read("track.csv"));
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "t,x_star,signal");
  double diff = 0.0, norm = 0.0;
  int rows = 0;
  while (std::getline(csv, line)) {
    double t = 0, x = 0, g = 0;
    ASSERT_EQ(std::sscanf(line.c_str(), "%lf,%lf,%lf", &t, &x, &g), 3);
    diff += (x - g) * (x - g);
    norm += g * g;
    ++rows;
  }
  EXPECT_EQ(rows, 48);
  EXPECT_LE(std::sqrt(diff / norm), 1e-3);
  const std::string svg = read("track.svg");
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  std::size_t polylines = 0;
  for (auto pos = svg.find("<polyline"); pos != std::string::npos; pos = svg.find("<polyline", pos + 1)) {
    ++polylines;
  }
  EXPECT_EQ(polylines, 2u);
}

TEST_F(CliTest, RoundTripVerifiesForTwentySeeds) {
  for (int seed = 1; seed <= 20; ++seed) {
    SCOPED_TRACE(seed);
    const std::string s = std::to_string(seed);
    ASSERT_EQ(run("sample --seed " + s + " --k 100 --n 48" + out_dir()), 0);
    ASSERT_EQ(run("aggregate --fleet " + quoted("fleet.csv") + " --n 48" + out_dir()), 0);
    Rng rng(static_cast<std::uint64_t>(seed));
    std::vector<double> price(48);
    for (double& p : price) p = uniform_unit(rng);
    write_series("price.csv", price);
    ASSERT_EQ(run("solve --aggregate " + quoted("aggregate.json") + " --price " +
                  quoted("price.csv") + out_dir()),
              0)
        << read("stderr.txt");
    ASSERT_EQ(run("disaggregate --solution " + quoted("solution.json") + " --fleet " +
                  quoted("fleet.csv") + out_dir()),
              0)
        << read("stderr.txt");
    const auto report = io::read_json_file(path("report.json"));
    EXPECT_TRUE(report.at("tracking_ok").get<bool>());
    EXPECT_TRUE(report.at("feasibility_ok").get<bool>());
    EXPECT_EQ(line_count(read("schedule.csv")), 102u);  // header, 100 EVs, aggregate
  }
}

TEST_F(CliTest, BenchWritesTheRuntimeTable) {
  ASSERT_EQ(run("bench --k 10,50 --n 6 --reps 1" + out_dir()), 0) << read("stderr.txt");
  std::istringstream csv(read("bench.csv"));
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "n,k,build_ms,solve_ms,iterations,gap");
  std::getline(csv, line);
  EXPECT_EQ(line.rfind("6,10,", 0), 0u);
  std::getline(csv, line);
  EXPECT_EQ(line.rfind("6,50,", 0), 0u);
  EXPECT_FALSE(std::getline(csv, line));
}

TEST_F(CliTest, HiddenOracleAgreesWithSupportAgg) {
  write("fleet.csv", "id,arrival,departure,energy,power\na,1,4,1.7,1\nb,2,4,1,0.8\n");
  write_series("y.csv", {0.3, -1, 2});
  ASSERT_EQ(run("oracle --fleet " + quoted("fleet.csv") + " --n 3 --direction " + quoted("y.csv")),
            0)
      << read("stderr.txt");
  const std::string out = read("stdout.txt");
  const auto pos = out.find("delta ");
  ASSERT_NE(pos, std::string::npos);
  EXPECT_LE(std::abs(std::stod(out.substr(pos + 6))), 1e-12);
}

TEST_F(CliTest, MissingInputIsAnIoError) {
  EXPECT_EQ(run("aggregate --fleet " + quoted("absent.csv") + " --n 4" + out_dir()), 4);
  EXPECT_FALSE(fs::exists(path("aggregate.json")));
}

TEST_F(CliTest, InvalidFleetIsAValidationFailure) {
  write("fleet.csv", "id,arrival,departure,energy,power\na,1,3,9,1\nb,2,2,1,1\n");
  EXPECT_EQ(run("aggregate --fleet " + quoted("fleet.csv") + " --n 4" + out_dir()), 2);
  EXPECT_FALSE(fs::exists(path("aggregate.json")));
  const std::string err = read("stderr.txt");
  EXPECT_NE(err.find("row 1"), std::string::npos);
  EXPECT_NE(err.find("row 2"), std::string::npos);
}

TEST_F(CliTest, UsageErrorsAreValidationFailures) {
  EXPECT_EQ(run("solve --no-such-flag"), 2);
  EXPECT_EQ(run("frobnicate"), 2);
  EXPECT_EQ(run("--help"), 0);
}

TEST_F(CliTest, HorizonMismatchIsRejected) {
  ASSERT_EQ(run("sample --seed 2 --k 5 --n 6" + out_dir()), 0);
  ASSERT_EQ(run("aggregate --fleet " + quoted("fleet.csv") + " --n 6" + out_dir()), 0);
  write_series("price.csv", {1, 2, 3, 4, 5, 6, 7});
  EXPECT_EQ(run("solve --aggregate " + quoted("aggregate.json") + " --n 7 --price " +
                quoted("price.csv") + out_dir()),
            2);
  EXPECT_EQ(run("solve --aggregate " + quoted("aggregate.json") + " --price " +
                quoted("price.csv") + out_dir()),
            2);
  EXPECT_FALSE(fs::exists(path("solution.json")));
}

TEST_F(CliTest, NonConvergenceExitsThreeAndLeavesNoArtifacts) {
  ASSERT_EQ(run("sample --seed 4 --k 60 --n 24" + out_dir()), 0);
  EXPECT_EQ(run("track --fleet " + quoted("fleet.csv") +
                " --n 24 --member-seed 1 --max-iters 1 --gap-tol 1e-12" + out_dir()),
            3);
  EXPECT_FALSE(fs::exists(path("solution.json")));
  EXPECT_FALSE(fs::exists(path("track.csv")));
  EXPECT_FALSE(fs::exists(path("track.svg")));
}

TEST_F(CliTest, FailedVerificationRemovesTheSchedule) {
  ASSERT_EQ(run("sample --seed 5 --k 20 --n 8" + out_dir()), 0);
  write_series("price.csv", {3, 1, 4, 1, 5, 9, 2, 6});
  ASSERT_EQ(run("solve --fleet " + quoted("fleet.csv") + " --n 8 --price " + quoted("price.csv") +
                out_dir()),
            0);
  // Same windows and ids, different energies: the solution no longer sums up.
  ASSERT_EQ(run("sample --seed 5 --k 20 --n 8 -o \"" + (dir_ / "other").string() + "\""), 0);
  auto other = load_fleet(path("other/fleet.csv"), FleetFormat::kCsv, TimeHorizon(8)).requests;
  for (auto& ev : other) ev.energy *= 0.5;
  {
    std::ofstream out(path("half.csv"));
    write_fleet_csv(out, other);
  }
  EXPECT_EQ(run("disaggregate --solution " + quoted("solution.json") + " --fleet " +
                quoted("half.csv") + out_dir()),
            2);
  EXPECT_FALSE(fs::exists(path("schedule.csv")));
  EXPECT_FALSE(fs::exists(path("report.json")));
}

}  // namespace
}  // namespace flexagg
