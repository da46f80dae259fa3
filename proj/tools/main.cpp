#include <CLI11.hpp>

#include <iostream>
#include <map>

#include "commands.hpp"

namespace {

using flexagg::cli::Command;
using flexagg::cli::RunConfig;

void add_solver_options(CLI::App& cmd, RunConfig& config) {
  static const std::map<std::string, flexagg::StepRule> step_rules = {
      {"exact", flexagg::StepRule::kExactLineSearch},
      {"open-loop", flexagg::StepRule::kOpenLoop}};
  static const std::map<std::string, flexagg::Direction> directions = {
      {"pairwise", flexagg::Direction::kPairwise},
      {"frank-wolfe", flexagg::Direction::kFrankWolfe}};
  static const std::map<std::string, flexagg::WindowSet> window_sets = {
      {"all", flexagg::WindowSet::kAllWindows}, {"occupied", flexagg::WindowSet::kOccupied}};

  cmd.add_option("--max-iters", config.solver.max_iters, "Iteration cap")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd.add_option("--gap-tol", config.solver.gap_tol, "Stop when gap <= tol * max(1, |f|)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd.add_option("--step-rule", config.solver.step_rule, "Line search (default exact)")
      ->transform(CLI::CheckedTransformer(step_rules, CLI::ignore_case))
      ->option_text("exact|open-loop");
  cmd.add_option("--direction", config.solver.direction, "Step direction (default pairwise)")
      ->transform(CLI::CheckedTransformer(directions, CLI::ignore_case))
      ->option_text("pairwise|frank-wolfe");
  cmd.add_option("--windows", config.solver.windows, "Windows carried by the solver (default all)")
      ->transform(CLI::CheckedTransformer(window_sets, CLI::ignore_case))
      ->option_text("all|occupied");
}

void add_out_dir(CLI::App& cmd, RunConfig& config) {
  cmd.add_option("-o,--out-dir", config.out_dir, "Directory for written files")
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Aggregate EV charging flexibility: sample, aggregate, solve, disaggregate"};
  app.require_subcommand(1);
  RunConfig config;

  auto* sample = app.add_subcommand("sample", "Write a synthetic fleet CSV");
  sample->add_option("--seed", config.seed, "Random seed")->capture_default_str();
  sample->add_option("--k", config.k, "Number of EVs")->capture_default_str();
  sample->add_option("--n", config.n, "Horizon length (default 48)")->check(CLI::PositiveNumber);
  add_out_dir(*sample, config);

  auto* aggregate = app.add_subcommand("aggregate", "Fleet file -> aggregate.json");
  aggregate->add_option("--fleet", config.fleet, "Fleet CSV or JSON")->required();
  aggregate->add_option("--n", config.n, "Horizon length")->required()->check(CLI::PositiveNumber);
  add_out_dir(*aggregate, config);

  auto* solve = app.add_subcommand("solve", "Aggregate + objective -> solution.json, x_star.csv");
  solve->add_option("--aggregate", config.aggregate, "aggregate.json");
  solve->add_option("--fleet", config.fleet, "Fleet file, aggregated on the fly");
  solve->add_option("--n", config.n, "Horizon length")->check(CLI::PositiveNumber);
  solve->add_option("--objective", config.objective, "linear | quadratic | tracking")
      ->check(CLI::IsMember({"linear", "quadratic", "tracking"}))
      ->capture_default_str();
  solve->add_option("--price", config.price, "Price series CSV");
  solve->add_option("--demand", config.demand, "External demand series CSV");
  solve->add_option("--signal", config.signal, "Tracking signal series CSV");
  add_solver_options(*solve, config);
  add_out_dir(*solve, config);

  auto* disaggregate =
      app.add_subcommand("disaggregate", "Solution + fleet -> schedule.csv, report.json");
  disaggregate->add_option("--solution", config.solution, "solution.json")->required();
  disaggregate->add_option("--fleet", config.fleet, "Fleet CSV or JSON")->required();
  disaggregate->add_option("--n", config.n, "Expected horizon length")->check(CLI::PositiveNumber);
  add_out_dir(*disaggregate, config);

  auto* bench = app.add_subcommand("bench", "Solve time across fleet sizes -> bench.csv");
  bench->add_option("--k", config.bench_k, "Fleet sizes")->delimiter(',')->capture_default_str();
  bench->add_option("--n", config.bench_n, "Horizon lengths")->delimiter(',')->capture_default_str();
  bench->add_option("--reps", config.bench_reps, "Repetitions per cell (median reported)")
      ->capture_default_str();
  bench->add_option("--seed", config.seed, "Random seed")->capture_default_str();
  bench->add_option("--objective", config.objective, "linear | tracking")
      ->check(CLI::IsMember({"linear", "tracking"}))
      ->capture_default_str();
  add_solver_options(*bench, config);
  add_out_dir(*bench, config);

  auto* track = app.add_subcommand("track", "Track a signal -> track.csv, track.svg");
  track->add_option("--aggregate", config.aggregate, "aggregate.json");
  track->add_option("--fleet", config.fleet, "Fleet file, aggregated on the fly");
  track->add_option("--n", config.n, "Horizon length")->check(CLI::PositiveNumber);
  track->add_option("--signal", config.signal, "Signal series CSV");
  track->add_option("--member-seed", config.member_seed,
                    "Track a random member of the aggregate set drawn with this seed");
  add_solver_options(*track, config);
  add_out_dir(*track, config);

  auto* oracle = app.add_subcommand("oracle", "Compare support_agg with brute-force enumeration");
  oracle->group("");
  oracle->add_option("--fleet", config.fleet, "Fleet file")->required();
  oracle->add_option("--n", config.n, "Horizon length")->required()->check(CLI::PositiveNumber);
  oracle->add_option("--direction", config.direction, "Direction series CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return flexagg::cli::kExitValidation;
  }

  const std::pair<CLI::App*, Command> commands[] = {
      {sample, Command::kSample},       {aggregate, Command::kAggregate},
      {solve, Command::kSolve},         {disaggregate, Command::kDisaggregate},
      {bench, Command::kBench},         {track, Command::kTrack},
      {oracle, Command::kOracle}};
  for (const auto& [sub, command] : commands) {
    if (sub->parsed()) config.command = command;
  }
  return flexagg::cli::run(config);
}
