#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "flexagg/error.hpp"
#include "flexagg/solver.hpp"

namespace flexagg::cli {

enum class Command { kSample, kAggregate, kSolve, kDisaggregate, kBench, kTrack, kOracle };

enum ExitStatus : int {
  kExitOk = 0,
  kExitValidation = 2,
  kExitNotConverged = 3,
  kExitIo = 4,
};

// Everything a subcommand reads. Unused fields keep their defaults.
struct RunConfig {
  Command command = Command::kSample;
  int n = 0;  // 0: take the horizon from the input file
  std::filesystem::path fleet;
  std::filesystem::path aggregate;
  std::filesystem::path solution;
  std::filesystem::path price;
  std::filesystem::path demand;
  std::filesystem::path signal;
  std::filesystem::path direction;
  std::string objective = "linear";
  SolverOptions solver;
  std::filesystem::path out_dir = ".";
  std::uint64_t seed = 1;
  int k = 100;
  std::optional<std::uint64_t> member_seed;
  std::vector<int> bench_k = {100, 1000, 8000};
  std::vector<int> bench_n = {24, 48};
  int bench_reps = 5;
};

int exit_status_for(ErrorCode code);

// Runs one subcommand. Returns its exit status after printing a message for
// any failure; artifacts written before a failure are removed.
int run(const RunConfig& config);

}  // namespace flexagg::cli
