#include "flexagg/io.hpp"

#include <fstream>
#include <string>

#include "text.hpp"

namespace flexagg::io {
namespace {

using nlohmann::json;

template <typename Fn>
auto parse_guard(Fn fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
}

MonotoneVertex nu_from(const json& block) {
  const Window w{block.at("arrival").get<int>(), block.at("departure").get<int>()};
  return MonotoneVertex(w, block.at("nu").get<std::vector<double>>());
}

}  // namespace

json aggregate_to_json(const AggregateFlexibility& agg) {
  json blocks = json::array();
  for (const Block& block : agg.blocks()) {
    blocks.push_back({{"arrival", block.window().arrival},
                      {"departure", block.window().departure},
                      {"nu", block.nu.values()},
                      {"members", block.members}});
  }
  return {{"horizon", agg.horizon().steps()},
          {"total_energy", agg.total_energy()},
          {"blocks", std::move(blocks)}};
}

AggregateFlexibility aggregate_from_json(const json& doc) {
  return parse_guard([&] {
    const TimeHorizon horizon(doc.at("horizon").get<int>());
    std::vector<Block> blocks;
    for (const json& block : doc.at("blocks")) {
      check_window({block.at("arrival").get<int>(), block.at("departure").get<int>()},
                   horizon);
      blocks.push_back({nu_from(block),
                        block.value("members", std::vector<std::string>{})});
    }
    return AggregateFlexibility(horizon, std::move(blocks));
  });
}

json solution_to_json(const SolverSolution& solution) {
  json blocks = json::array();
  for (const BirkhoffVariable& v : solution.variables) {
    json atoms = json::array();
    for (const Atom& atom : v.atoms()) {
      atoms.push_back({{"weight", atom.weight}, {"perm", atom.perm.one_line()}});
    }
    blocks.push_back({{"arrival", v.window().arrival},
                      {"departure", v.window().departure},
                      {"nu", v.nu().values()},
                      {"atoms", std::move(atoms)}});
  }
  return {{"horizon", solution.horizon.steps()},
          {"x_star", solution.x_star},
          {"objective_value", solution.objective_value},
          {"fw_gap", solution.fw_gap},
          {"iterations", solution.iterations},
          {"converged", solution.converged},
          {"blocks", std::move(blocks)}};
}

SolverSolution solution_from_json(const json& doc) {
  return parse_guard([&] {
    SolverSolution solution;
    solution.horizon = TimeHorizon(doc.at("horizon").get<int>());
    solution.x_star = doc.at("x_star").get<std::vector<double>>();
    solution.objective_value = doc.at("objective_value").get<double>();
    solution.fw_gap = doc.at("fw_gap").get<double>();
    solution.iterations = doc.at("iterations").get<int>();
    solution.converged = doc.at("converged").get<bool>();
    if (solution.x_star.size() != static_cast<std::size_t>(solution.horizon.steps())) {
      throw Error(ErrorCode::kParseError, "x_star length does not match horizon");
    }
    for (const json& block : doc.at("blocks")) {
      MonotoneVertex nu = nu_from(block);
      check_window(nu.window(), solution.horizon);
      std::vector<Atom> atoms;
      for (const json& atom : block.at("atoms")) {
        atoms.push_back({atom.at("weight").get<double>(),
                         Permutation(atom.at("perm").get<std::vector<int>>())});
      }
      solution.variables.emplace_back(std::move(nu), std::move(atoms));
    }
    std::sort(solution.variables.begin(), solution.variables.end(),
              [](const BirkhoffVariable& l, const BirkhoffVariable& r) {
                return l.window() < r.window();
              });
    return solution;
  });
}

json report_to_json(const VerifyReport& report) {
  json violations = json::array();
  for (const EvViolation& v : report.violations) {
    violations.push_back(
        {{"id", v.id}, {"kind", v.kind}, {"step", v.step}, {"amount", v.amount}});
  }
  return {{"passed", report.passed()},
          {"tracking_ok", report.tracking_ok},
          {"feasibility_ok", report.feasibility_ok},
          {"aggregate_residual", report.aggregate_residual},
          {"violations", std::move(violations)}};
}

std::vector<double> read_series_csv(std::istream& in, TimeHorizon horizon) {
  const auto n = static_cast<std::size_t>(horizon.steps());
  std::vector<double> values(n, 0.0);
  std::vector<bool> seen(n, false);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto view = text::trim(line);
    if (view.empty()) continue;
    const auto fields = text::split(view, ',');
    const auto t = fields.size() == 2 ? text::parse_number<int>(fields[0]) : std::nullopt;
    const auto value =
        fields.size() == 2 ? text::parse_number<double>(fields[1]) : std::nullopt;
    if (!t || !value) {
      if (line_no == 1 && fields.size() == 2 && !t) continue;  // header
      throw Error(ErrorCode::kParseError,
                  "line " + std::to_string(line_no) + ": expected 't,value'");
    }
    if (*t < 1 || static_cast<std::size_t>(*t) > n || seen[static_cast<std::size_t>(*t - 1)]) {
      throw Error(ErrorCode::kParseError,
                  "line " + std::to_string(line_no) + ": step " +
                      std::to_string(*t) + " is out of range or repeated");
    }
    seen[static_cast<std::size_t>(*t - 1)] = true;
    values[static_cast<std::size_t>(*t - 1)] = *value;
  }
  if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
    throw Error(ErrorCode::kParseError,
                "series must give a value for every step 1.." + std::to_string(n));
  }
  return values;
}

void write_series_csv(std::ostream& out, std::span<const double> values) {
  out << "t,value\n";
  for (std::size_t t = 0; t < values.size(); ++t) {
    out << t + 1 << ',' << text::format_number(values[t]) << '\n';
  }
}

void write_schedule_csv(std::ostream& out, const Schedule& sched) {
  out << "id";
  for (std::size_t t = 0; t < sched.aggregate.size(); ++t) out << ",t" << t + 1;
  out << '\n';
  for (const EvProfile& ev : sched.profiles) {
    out << ev.id;
    for (double u : ev.profile) out << ',' << text::format_number(u);
    out << '\n';
  }
  out << "AGGREGATE";
  for (double x : sched.aggregate) out << ',' << text::format_number(x);
  out << '\n';
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  return parse_guard([&] { return json::parse(in); });
}

void write_json_file(const std::filesystem::path& path, const json& doc) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  out << doc.dump(2) << '\n';
  if (!out) throw Error(ErrorCode::kIoError, "failed writing " + path.string());
}

std::vector<double> read_series_file(const std::filesystem::path& path,
                                     TimeHorizon horizon) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  return read_series_csv(in, horizon);
}

}  // namespace flexagg::io
