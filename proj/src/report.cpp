#include "hhf/report.hpp"

#include <cstdio>
#include <sstream>

namespace hhf {

namespace {

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

std::string ReportEntry::status() const {
  if (skipped) return "skipped: cap";
  if (record.kind == "info") return "info";
  return record.passed ? "pass" : "fail";
}

bool ReportDocument::passed() const {
  for (const auto& e : checks)
    if (!e.skipped && e.record.kind != "info" && !e.record.passed) return false;
  return true;
}

std::vector<std::string> ReportDocument::failing() const {
  std::vector<std::string> out;
  for (const auto& e : checks)
    if (e.status() == "fail") out.push_back(e.record.name);
  return out;
}

void ReportDocument::add(const std::string& module, const CheckRecord& r) { checks.push_back({module, r, false}); }

void ReportDocument::add(const std::string& module, const BoundReport& r) {
  for (const auto& rec : r.records) add(module, rec);
}

void ReportDocument::skip(const std::string& module, const std::string& name, const std::string& note) {
  CheckRecord r;
  r.name = name;
  r.note = note;
  r.passed = false;
  checks.push_back({module, r, true});
}

Json to_json(const CheckRecord& r) {
  Json j;
  j["name"] = r.name;
  j["kind"] = r.kind;
  j["relation"] = r.relation;
  j["measured"] = r.measured;
  j["bound"] = r.bound;
  j["margin"] = r.margin;
  j["passed"] = r.passed;
  j["note"] = r.note;
  return j;
}

CheckRecord check_record_from_json(const Json& j) {
  CheckRecord r;
  r.name = j.at("name").get<std::string>();
  r.kind = j.at("kind").get<std::string>();
  r.relation = j.at("relation").get<std::string>();
  r.measured = j.at("measured").get<double>();
  r.bound = j.at("bound").get<double>();
  r.margin = j.at("margin").get<double>();
  r.passed = j.at("passed").get<bool>();
  r.note = j.value("note", std::string{});
  return r;
}

Json to_json(const BoundReport& r) {
  Json j;
  j["d"] = r.d;
  j["L"] = r.L;
  j["g"] = r.g;
  j["delta"] = r.delta;
  j["passed"] = r.passed();
  j["records"] = Json::array();
  for (const auto& rec : r.records) j["records"].push_back(to_json(rec));
  return j;
}

BoundReport bound_report_from_json(const Json& j) {
  BoundReport r;
  r.d = j.at("d").get<int>();
  r.L = j.at("L").get<int>();
  r.g = j.at("g").get<double>();
  r.delta = j.at("delta").get<double>();
  for (const auto& rec : j.at("records")) r.records.push_back(check_record_from_json(rec));
  return r;
}

Json to_json(const ReportDocument& doc) {
  Json j;
  j["version"] = doc.version;
  j["config"] = doc.config;
  j["passed"] = doc.passed();
  j["failing"] = doc.failing();
  j["values"] = doc.values;
  j["checks"] = Json::array();
  for (const auto& e : doc.checks) {
    Json c;
    c["module"] = e.module;
    const Json rec = to_json(e.record);
    for (const auto& [k, v] : rec.items()) c[k] = v;
    c["status"] = e.status();
    j["checks"].push_back(std::move(c));
  }
  if (doc.timings) j["timings"] = *doc.timings;
  return j;
}

ReportDocument report_from_json(const Json& j) {
  ReportDocument doc;
  doc.version = j.at("version").get<std::string>();
  doc.config = j.at("config");
  doc.values = j.at("values");
  for (const auto& c : j.at("checks")) {
    ReportEntry e;
    e.module = c.at("module").get<std::string>();
    e.record = check_record_from_json(c);
    e.skipped = c.at("status").get<std::string>() == "skipped: cap";
    doc.checks.push_back(std::move(e));
  }
  if (j.contains("timings")) doc.timings = j.at("timings");
  return doc;
}

std::string checks_csv(const ReportDocument& doc) {
  std::ostringstream out;
  out << "module,name,kind,relation,measured,bound,margin,status\n";
  for (const auto& e : doc.checks) {
    const auto& r = e.record;
    out << e.module << ',' << r.name << ',' << r.kind << ',' << r.relation << ',' << num(r.measured) << ','
        << num(r.bound) << ',' << num(r.margin) << ',' << e.status() << '\n';
  }
  return out.str();
}

std::string sweep_csv(const SweepResult& sweep) {
  std::ostringstream out;
  out << "L,delta,q7_per_vol,a_half,passed,closed_per_vol,floor\n";
  for (const auto& r : sweep.rows)
    out << r.L << ',' << num(r.delta) << ',' << num(r.q7_per_vol) << ',' << num(r.a_half) << ','
        << (r.passed ? "true" : "false") << ',' << num(r.closed_per_vol) << ',' << num(r.floor) << '\n';
  return out.str();
}

}  // namespace hhf
