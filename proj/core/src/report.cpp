#include "chred/report.hpp"

#include <nlohmann/json.hpp>
#include <sstream>

namespace chred {

using ordered_json = nlohmann::ordered_json;

bool Report::all_pass() const {
  if (checks.empty()) return true;
  for (const auto& check : checks)
    if (check.verdict != "pass") return false;
  return true;
}

std::string report_json(const Report& report) {
  ordered_json doc;
  doc["schema_version"] = report.schema_version;
  doc["tool_version"] = report.tool_version;
  doc["scenario"] = report.scenario_name;
  doc["seed"] = report.seed;
  doc["checks"] = ordered_json::array();
  for (const auto& check : report.checks) {
    ordered_json c;
    c["id"] = check.id;
    c["property"] = check.property;
    c["points_tested"] = check.points_tested;
    c["points_skipped"] = check.points_skipped;
    c["max_residual"] = check.max_residual;
    c["verdict"] = check.verdict;
    c["detail"] = check.detail;
    doc["checks"].push_back(std::move(c));
  }
  doc["verdict"] = report.all_pass() ? "pass" : "fail";
  return doc.dump(2) + "\n";
}

Report report_from_json(const std::string& text) {
  ordered_json doc = ordered_json::parse(text);
  Report report;
  report.schema_version = doc.at("schema_version").get<int>();
  report.tool_version = doc.at("tool_version").get<std::string>();
  report.scenario_name = doc.at("scenario").get<std::string>();
  report.seed = doc.at("seed").get<std::uint64_t>();
  for (const auto& c : doc.at("checks")) {
    CheckRecord record;
    record.id = c.at("id").get<std::string>();
    record.property = c.at("property").get<std::string>();
    record.points_tested = c.at("points_tested").get<int>();
    record.points_skipped = c.at("points_skipped").get<int>();
    record.max_residual = c.at("max_residual").get<double>();
    record.verdict = c.at("verdict").get<std::string>();
    record.detail = c.at("detail").get<std::string>();
    report.checks.push_back(std::move(record));
  }
  return report;
}

std::string report_csv_summary(const Report& report) {
  std::ostringstream out;
  out << "scenario,check,verdict,points_tested,points_skipped,max_residual\n";
  char buf[32];
  for (const auto& check : report.checks) {
    std::snprintf(buf, sizeof(buf), "%.17g", check.max_residual);
    out << report.scenario_name << ',' << check.id << ',' << check.verdict
        << ',' << check.points_tested << ',' << check.points_skipped << ','
        << buf << '\n';
  }
  return out.str();
}

}  // namespace chred
