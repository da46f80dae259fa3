#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "flexagg/fleet.hpp"
#include "text.hpp"

namespace flexagg {
namespace {

constexpr std::string_view kFleetHeader = "id,arrival,departure,energy,power";

std::string describe(const std::vector<RowIssue>& issues) {
  std::ostringstream msg;
  msg << issues.size() << " invalid fleet row(s)";
  for (const RowIssue& issue : issues) {
    msg << "\n  row " << issue.row << ": " << issue.message;
  }
  return msg.str();
}

ErrorCode first_code(const std::vector<RowIssue>& issues) {
  return issues.empty() ? ErrorCode::kParseError : issues.front().code;
}

// Validates `request` and records any failure against `row`.
void accept_row(EvRequest request, std::size_t row, TimeHorizon horizon,
                LoadedFleet& fleet, std::vector<RowIssue>& issues) {
  try {
    fleet.requests.push_back(validate(request, horizon).request);
  } catch (const Error& e) {
    issues.push_back({row, e.code(), e.what()});
  }
}

}  // namespace

FleetLoadError::FleetLoadError(std::vector<RowIssue> issues)
    : Error(first_code(issues), describe(issues)), issues_(std::move(issues)) {}

LoadedFleet parse_fleet_csv(std::istream& in, TimeHorizon horizon) {
  LoadedFleet fleet;
  std::vector<RowIssue> issues;
  std::string line;
  bool header_seen = false;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    std::string_view view = text::trim(line);
    if (!header_seen) {
      if (view.empty()) continue;
      if (view.starts_with("\xEF\xBB\xBF")) view.remove_prefix(3);
      if (view != kFleetHeader) {
        throw Error(ErrorCode::kParseError,
                    "fleet CSV must start with header '" +
                        std::string(kFleetHeader) + "'");
      }
      header_seen = true;
      continue;
    }
    if (view.empty()) continue;
    ++row;
    const auto fields = text::split(view, ',');
    if (fields.size() != 5) {
      issues.push_back({row, ErrorCode::kParseError,
                        "expected 5 fields, found " +
                            std::to_string(fields.size())});
      continue;
    }
    const auto arrival = text::parse_number<int>(fields[1]);
    const auto departure = text::parse_number<int>(fields[2]);
    const auto energy = text::parse_number<double>(fields[3]);
    const auto power = text::parse_number<double>(fields[4]);
    if (fields[0].empty() || !arrival || !departure || !energy || !power) {
      issues.push_back({row, ErrorCode::kParseError,
                        "malformed row '" + std::string(view) + "'"});
      continue;
    }
    accept_row({std::string(fields[0]), *energy, *arrival, *departure, *power},
               row, horizon, fleet, issues);
  }
  if (!issues.empty()) throw FleetLoadError(std::move(issues));
  if (fleet.requests.empty()) fleet.warnings.push_back("fleet is empty");
  return fleet;
}

LoadedFleet parse_fleet_json(std::istream& in, TimeHorizon horizon) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
  if (!doc.is_array()) {
    throw Error(ErrorCode::kParseError, "fleet JSON must be an array");
  }
  LoadedFleet fleet;
  std::vector<RowIssue> issues;
  std::size_t row = 0;
  for (const auto& item : doc) {
    ++row;
    try {
      EvRequest request{item.at("id").get<std::string>(),
                        item.at("energy").get<double>(),
                        item.at("arrival").get<int>(),
                        item.at("departure").get<int>(),
                        item.at("power").get<double>()};
      accept_row(std::move(request), row, horizon, fleet, issues);
    } catch (const nlohmann::json::exception& e) {
      issues.push_back({row, ErrorCode::kParseError, e.what()});
    }
  }
  if (!issues.empty()) throw FleetLoadError(std::move(issues));
  if (fleet.requests.empty()) fleet.warnings.push_back("fleet is empty");
  return fleet;
}

FleetFormat fleet_format_for(const std::filesystem::path& path) {
  return path.extension() == ".json" ? FleetFormat::kJson : FleetFormat::kCsv;
}

LoadedFleet load_fleet(const std::filesystem::path& path, FleetFormat format,
                       TimeHorizon horizon) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  }
  return format == FleetFormat::kJson ? parse_fleet_json(in, horizon)
                                      : parse_fleet_csv(in, horizon);
}

void write_fleet_csv(std::ostream& out, std::span<const EvRequest> fleet) {
  out << kFleetHeader << '\n';
  for (const EvRequest& ev : fleet) {
    out << ev.id << ',' << ev.arrival << ',' << ev.departure << ','
        << text::format_number(ev.energy) << ','
        << text::format_number(ev.power) << '\n';
  }
}

}  // namespace flexagg
