#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "hhf/bounds.hpp"

namespace hhf {

using Json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "1.0.0";

// One flat record per check, tagged with the module that produced it.
struct ReportEntry {
  std::string module;
  CheckRecord record;
  bool skipped = false;  // status "skipped: cap"

  std::string status() const;
};

struct ReportDocument {
  Json config = Json::object();
  Json values = Json::object();  // scalar outputs keyed by module
  std::vector<ReportEntry> checks;
  std::optional<Json> timings;  // only when requested; keeps reports byte-identical otherwise
  std::string version = kVersion;

  bool passed() const;
  std::vector<std::string> failing() const;
  void add(const std::string& module, const CheckRecord& r);
  void add(const std::string& module, const BoundReport& r);
  void skip(const std::string& module, const std::string& name, const std::string& note);
};

Json to_json(const CheckRecord& r);
CheckRecord check_record_from_json(const Json& j);
Json to_json(const BoundReport& r);
BoundReport bound_report_from_json(const Json& j);
Json to_json(const ReportDocument& doc);
ReportDocument report_from_json(const Json& j);

// Flat table of checks: module,name,kind,relation,measured,bound,margin,status
std::string checks_csv(const ReportDocument& doc);
// Extensivity table: L,delta,q7_per_vol,a_half,passed,closed_per_vol,floor
std::string sweep_csv(const SweepResult& sweep);

}  // namespace hhf
