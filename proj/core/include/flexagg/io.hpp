#pragma once

#include <filesystem>
#include <istream>
#include <ostream>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "flexagg/aggregate.hpp"
#include "flexagg/disaggregate.hpp"
#include "flexagg/solver.hpp"

namespace flexagg::io {

// {"horizon": n, "total_energy": E, "blocks": [{"arrival", "departure",
//   "nu": [...], "members": [...]}]}
nlohmann::json aggregate_to_json(const AggregateFlexibility& agg);
AggregateFlexibility aggregate_from_json(const nlohmann::json& doc);

// {"horizon", "x_star", "objective_value", "fw_gap", "iterations",
//  "converged", "blocks": [{"arrival", "departure", "nu",
//  "atoms": [{"weight", "perm": [...]}]}]}
nlohmann::json solution_to_json(const SolverSolution& solution);
SolverSolution solution_from_json(const nlohmann::json& doc);

nlohmann::json report_to_json(const VerifyReport& report);

// `t,value` rows with t = 1..n; a header line is optional on input.
std::vector<double> read_series_csv(std::istream& in, TimeHorizon horizon);
void write_series_csv(std::ostream& out, std::span<const double> values);

// Header `id,t1,...,tn`, one row per EV, then `AGGREGATE,...`.
void write_schedule_csv(std::ostream& out, const Schedule& sched);

nlohmann::json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const nlohmann::json& doc);
std::vector<double> read_series_file(const std::filesystem::path& path,
                                     TimeHorizon horizon);

}  // namespace flexagg::io
