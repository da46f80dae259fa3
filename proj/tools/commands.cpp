#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <system_error>

#include "flexagg/aggregate.hpp"
#include "flexagg/disaggregate.hpp"
#include "flexagg/fleet.hpp"
#include "flexagg/io.hpp"
#include "flexagg/oracle.hpp"
#include "flexagg/random.hpp"
#include "svg.hpp"

namespace flexagg::cli {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

constexpr int kDefaultHorizon = 48;
constexpr double kAggregateTolPerEv = 1e-6;

// Files written by the current command. Unless commit() is called they are
// deleted on destruction, so a failed command leaves nothing behind.
class Artifacts {
 public:
  explicit Artifacts(fs::path dir) : dir_(std::move(dir)) {}
  Artifacts(const Artifacts&) = delete;
  Artifacts& operator=(const Artifacts&) = delete;

  ~Artifacts() {
    if (committed_) return;
    for (const auto& path : written_) {
      std::error_code ignored;
      fs::remove(path, ignored);
    }
  }

  fs::path add(const std::string& name) {
    if (!dir_.empty()) {
      std::error_code ec;
      fs::create_directories(dir_, ec);
      if (ec) throw Error(ErrorCode::kIoError, "cannot create " + dir_.string() + ": " + ec.message());
    }
    written_.push_back(dir_ / name);
    return written_.back();
  }

  void commit() { committed_ = true; }

 private:
  fs::path dir_;
  std::vector<fs::path> written_;
  bool committed_ = false;
};

std::string num(double v, int digits = 17) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

void write_text(const fs::path& path, const std::function<void(std::ostream&)>& body) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  body(out);
  out.flush();
  if (!out) throw Error(ErrorCode::kIoError, "failed writing " + path.string());
}

// The --n flag, when given, must agree with the horizon stored in a file.
TimeHorizon horizon_for(const RunConfig& config, int from_file) {
  if (config.n > 0 && config.n != from_file) {
    throw Error(ErrorCode::kDimensionMismatch,
                "--n " + std::to_string(config.n) + " disagrees with the input horizon " +
                    std::to_string(from_file));
  }
  return TimeHorizon(from_file);
}

TimeHorizon required_horizon(const RunConfig& config) {
  if (config.n <= 0) throw Error(ErrorCode::kInvalidArgument, "--n is required with --fleet");
  return TimeHorizon(config.n);
}

std::vector<EvRequest> read_fleet(const fs::path& path, TimeHorizon horizon) {
  auto loaded = load_fleet(path, fleet_format_for(path), horizon);
  for (const auto& warning : loaded.warnings) std::cerr << "warning: " << warning << '\n';
  return std::move(loaded.requests);
}

// Aggregate from --aggregate, or built from --fleet and --n.
AggregateFlexibility read_aggregate(const RunConfig& config) {
  const bool from_fleet = !config.fleet.empty();
  const bool from_file = !config.aggregate.empty();
  if (from_fleet == from_file) {
    throw Error(ErrorCode::kInvalidArgument, "give exactly one of --aggregate and --fleet");
  }
  if (from_file) {
    auto agg = io::aggregate_from_json(io::read_json_file(config.aggregate));
    horizon_for(config, agg.horizon().steps());
    return agg;
  }
  const TimeHorizon horizon = required_horizon(config);
  return build(read_fleet(config.fleet, horizon), horizon);
}

std::vector<double> required_series(const fs::path& path, const char* flag,
                                    TimeHorizon horizon) {
  if (path.empty()) {
    throw Error(ErrorCode::kInvalidArgument, std::string(flag) + " is required");
  }
  return io::read_series_file(path, horizon);
}

Objective make_objective(const RunConfig& config, TimeHorizon horizon) {
  if (config.objective == "linear") {
    return Objective::linear(required_series(config.price, "--price", horizon));
  }
  if (config.objective == "quadratic") {
    return Objective::quadratic(required_series(config.price, "--price", horizon),
                                required_series(config.demand, "--demand", horizon));
  }
  if (config.objective == "tracking") {
    return Objective::tracking(required_series(config.signal, "--signal", horizon));
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown objective " + config.objective);
}

void require_converged(const SolverSolution& sol) {
  if (!sol.converged) {
    throw Error(ErrorCode::kSolverFailure,
                "solver stopped after " + std::to_string(sol.iterations) +
                    " iterations with gap " + num(sol.fw_gap));
  }
}

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double median(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  return values.size() % 2 == 1 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

void run_sample(const RunConfig& config, Artifacts& artifacts) {
  const TimeHorizon horizon(config.n > 0 ? config.n : kDefaultHorizon);
  if (config.k < 0) throw Error(ErrorCode::kInvalidArgument, "--k must be nonnegative");
  const auto fleet = sample_fleet(config.seed, config.k, horizon);
  for (const auto& ev : fleet) validate(ev, horizon);
  const auto path = artifacts.add("fleet.csv");
  write_text(path, [&](std::ostream& out) { write_fleet_csv(out, fleet); });
  std::cout << "sampled " << fleet.size() << " EVs over n=" << horizon.steps() << " -> "
            << path.string() << '\n';
}

void run_aggregate(const RunConfig& config, Artifacts& artifacts) {
  if (config.fleet.empty()) throw Error(ErrorCode::kInvalidArgument, "--fleet is required");
  const TimeHorizon horizon = required_horizon(config);
  const auto fleet = read_fleet(config.fleet, horizon);
  const auto agg = build(fleet, horizon);
  const auto path = artifacts.add("aggregate.json");
  io::write_json_file(path, io::aggregate_to_json(agg));
  std::cout << fleet.size() << " EVs in " << agg.blocks().size()
            << " windows, total energy " << num(agg.total_energy()) << " -> " << path.string()
            << '\n';
}

void write_solution(const SolverSolution& sol, Artifacts& artifacts) {
  io::write_json_file(artifacts.add("solution.json"), io::solution_to_json(sol));
}

void run_solve(const RunConfig& config, Artifacts& artifacts) {
  const auto agg = read_aggregate(config);
  const auto sol = solve(agg, make_objective(config, agg.horizon()), config.solver);
  require_converged(sol);
  write_solution(sol, artifacts);
  write_text(artifacts.add("x_star.csv"),
             [&](std::ostream& out) { io::write_series_csv(out, sol.x_star); });
  std::cout << config.objective << " objective " << num(sol.objective_value) << ", gap "
            << num(sol.fw_gap) << ", " << sol.iterations << " iterations\n";
}

void run_disaggregate(const RunConfig& config, Artifacts& artifacts) {
  if (config.solution.empty() || config.fleet.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "--solution and --fleet are required");
  }
  const auto sol = io::solution_from_json(io::read_json_file(config.solution));
  const TimeHorizon horizon = horizon_for(config, sol.horizon.steps());
  const auto fleet = read_fleet(config.fleet, horizon);
  const auto agg = build(fleet, horizon);
  const auto sched = schedule(sol, fleet, agg);

  VerifyOptions options;
  options.aggregate_tol = kAggregateTolPerEv * std::max<double>(1.0, static_cast<double>(fleet.size()));
  const auto report = verify(sched, sol.x_star, fleet, options);

  write_text(artifacts.add("schedule.csv"), [&](std::ostream& out) {
    io::write_schedule_csv(out, clamp_for_output(sched, fleet));
  });
  io::write_json_file(artifacts.add("report.json"), io::report_to_json(report));

  std::cout << "aggregate residual " << num(report.aggregate_residual) << ", "
            << report.violations.size() << " EV violations\n";
  if (!report.passed()) {
    const std::size_t shown = std::min<std::size_t>(report.violations.size(), 10);
    for (std::size_t i = 0; i < shown; ++i) {
      const auto& v = report.violations[i];
      std::cerr << "  " << v.id << ' ' << v.kind << " step " << v.step << " by "
                << num(v.amount) << '\n';
    }
    throw Error(ErrorCode::kFleetMismatch, "schedule failed verification");
  }
}

void run_bench(const RunConfig& config, Artifacts& artifacts) {
  if (config.bench_reps < 1) throw Error(ErrorCode::kInvalidArgument, "--reps must be >= 1");
  if (config.objective != "linear" && config.objective != "tracking") {
    throw Error(ErrorCode::kInvalidArgument, "bench supports linear and tracking objectives");
  }
  const auto path = artifacts.add("bench.csv");
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  out << "n,k,build_ms,solve_ms,iterations,gap\n";
  std::cout << "     n       k    build_ms    solve_ms  iters  gap\n";

  for (int n : config.bench_n) {
    const TimeHorizon horizon(n);
    Rng rng(config.seed);
    std::vector<double> price(static_cast<std::size_t>(n));
    for (double& p : price) p = uniform_unit(rng);
    for (int k : config.bench_k) {
      const auto fleet = sample_fleet(config.seed, k, horizon);
      std::vector<double> build_ms, solve_ms;
      SolverSolution sol;
      for (int rep = 0; rep < config.bench_reps; ++rep) {
        const auto start = Clock::now();
        const auto agg = build(fleet, horizon);
        build_ms.push_back(elapsed_ms(start));
        const Objective objective = config.objective == "linear"
                                        ? Objective::linear(price)
                                        : Objective::tracking(sample_member(agg, config.seed));
        const auto solve_start = Clock::now();
        sol = solve(agg, objective, config.solver);
        solve_ms.push_back(elapsed_ms(solve_start));
      }
      const double b = median(build_ms), s = median(solve_ms);
      out << n << ',' << k << ',' << num(b, 6) << ',' << num(s, 6) << ',' << sol.iterations
          << ',' << num(sol.fw_gap, 6) << '\n';
      char line[128];
      std::snprintf(line, sizeof line, "%6d %7d %11.3f %11.3f %6d  %.3g%s\n", n, k, b, s,
                    sol.iterations, sol.fw_gap, sol.converged ? "" : " (not converged)");
      std::cout << line;
    }
  }
  out.flush();
  if (!out) throw Error(ErrorCode::kIoError, "failed writing " + path.string());
}

void run_track(const RunConfig& config, Artifacts& artifacts) {
  const auto agg = read_aggregate(config);
  const TimeHorizon horizon = agg.horizon();
  if (config.signal.empty() == !config.member_seed.has_value()) {
    throw Error(ErrorCode::kInvalidArgument, "give exactly one of --signal and --member-seed");
  }
  const auto signal = config.member_seed ? sample_member(agg, *config.member_seed)
                                         : io::read_series_file(config.signal, horizon);
  const auto sol = solve(agg, Objective::tracking(signal), config.solver);
  require_converged(sol);

  std::vector<double> diff(signal.size());
  for (std::size_t t = 0; t < diff.size(); ++t) diff[t] = sol.x_star[t] - signal[t];
  const double scale = norm2(signal);
  const double residual = scale > 0.0 ? norm2(diff) / scale : norm2(diff);

  write_solution(sol, artifacts);
  write_text(artifacts.add("track.csv"), [&](std::ostream& out) {
    out << "t,x_star,signal\n";
    for (std::size_t t = 0; t < signal.size(); ++t) {
      out << t + 1 << ',' << num(sol.x_star[t]) << ',' << num(signal[t]) << '\n';
    }
  });
  const Series series[] = {{"signal", signal, "#d62728"}, {"x*", sol.x_star, "#1f77b4"}};
  write_text(artifacts.add("track.svg"),
             [&](std::ostream& out) { out << line_plot(series, "aggregate charging vs signal"); });
  std::cout << "relative residual " << num(residual) << " after " << sol.iterations
            << " iterations\n";
}

void run_oracle(const RunConfig& config) {
  if (config.fleet.empty() || config.direction.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "--fleet and --direction are required");
  }
  const TimeHorizon horizon = required_horizon(config);
  const auto fleet = read_fleet(config.fleet, horizon);
  const auto y = io::read_series_file(config.direction, horizon);
  const double exact = support_agg(build(fleet, horizon), y);
  const double brute = oracle::cloud_support(oracle::brute_force_cloud(fleet, horizon), y);
  std::cout << "support_agg " << num(exact) << "\ncloud_support " << num(brute) << "\ndelta "
            << num(exact - brute) << '\n';
}

}  // namespace

int exit_status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kIoError:
      return kExitIo;
    case ErrorCode::kSolverFailure:
      return kExitNotConverged;
    default:
      return kExitValidation;
  }
}

int run(const RunConfig& config) {
  Artifacts artifacts(config.out_dir);
  try {
    switch (config.command) {
      case Command::kSample: run_sample(config, artifacts); break;
      case Command::kAggregate: run_aggregate(config, artifacts); break;
      case Command::kSolve: run_solve(config, artifacts); break;
      case Command::kDisaggregate: run_disaggregate(config, artifacts); break;
      case Command::kBench: run_bench(config, artifacts); break;
      case Command::kTrack: run_track(config, artifacts); break;
      case Command::kOracle: run_oracle(config); break;
    }
  } catch (const FleetLoadError& e) {
    std::cerr << "error: " << e.what() << '\n';
    for (const auto& issue : e.issues()) {
      std::cerr << "  row " << issue.row << " [" << to_string(issue.code) << "] "
                << issue.message << '\n';
    }
    return exit_status_for(e.code());
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_status_for(e.code());
  } catch (const std::bad_alloc&) {
    std::cerr << "error: out of memory\n";
    return kExitValidation;
  }
  artifacts.commit();
  return kExitOk;
}

}  // namespace flexagg::cli
