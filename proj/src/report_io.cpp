#include "windings/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace windings {

using nlohmann::ordered_json;

std::string format_g6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string format_hex(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

namespace {

ordered_json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

double get_number(const nlohmann::json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::numeric_limits<double>::quiet_NaN();
  return it->get<double>();
}

Verdict verdict_from(const std::string& s) {
  if (s == "pass") return Verdict::pass;
  if (s == "inconclusive") return Verdict::inconclusive;
  if (s == "fail") return Verdict::fail;
  throw std::invalid_argument("unknown verdict: " + s);
}

CheckKind kind_from(const std::string& s) {
  for (CheckKind k : {CheckKind::within_se, CheckKind::within_abs, CheckKind::within_rel,
                      CheckKind::ks, CheckKind::at_most, CheckKind::at_least}) {
    if (to_string(k) == s) return k;
  }
  throw std::invalid_argument("unknown check kind: " + s);
}

}  // namespace

ordered_json to_json(const ExperimentReport& r) {
  ordered_json j;
  j["name"] = r.name;
  j["claim"] = r.claim;
  j["verdict"] = std::string(to_string(r.verdict));
  j["seed"] = r.seed;
  j["n_paths"] = r.n_paths;
  j["dt"] = r.dt;
  if (!r.checks.empty()) {
    const Check& head = r.checks.front();
    j["target"] = number(head.target);
    j["estimate"] = {{"mean", number(head.estimate)}, {"stderr", number(head.std_error)}, {"n", head.n}};
    j["tolerance"] = number(head.tolerance);
  }
  ordered_json checks = ordered_json::array();
  for (const Check& c : r.checks) {
    ordered_json cj;
    cj["name"] = c.name;
    cj["kind"] = std::string(to_string(c.kind));
    cj["estimate"] = number(c.estimate);
    cj["target"] = number(c.target);
    cj["tolerance"] = number(c.tolerance);
    cj["stderr"] = number(c.std_error);
    cj["n"] = c.n;
    cj["passed"] = c.passed;
    cj["estimate_hex"] = format_hex(c.estimate);
    cj["target_hex"] = format_hex(c.target);
    checks.push_back(std::move(cj));
  }
  j["checks"] = std::move(checks);
  ordered_json diags = ordered_json::array();
  for (const Diagnostic& d : r.diagnostics) {
    diags.push_back({{"name", d.name}, {"value", number(d.value)}, {"value_hex", format_hex(d.value)}});
  }
  j["diagnostics"] = std::move(diags);
  j["inconclusive_reasons"] = r.inconclusive_reasons;
  j["note"] = r.note;
  return j;
}

ExperimentReport report_from_json(const nlohmann::json& j) {
  ExperimentReport r;
  r.name = j.at("name").get<std::string>();
  r.claim = j.value("claim", "");
  r.verdict = verdict_from(j.at("verdict").get<std::string>());
  r.seed = j.at("seed").get<std::uint64_t>();
  r.n_paths = j.value("n_paths", std::size_t{0});
  r.dt = get_number(j, "dt");
  for (const auto& cj : j.value("checks", nlohmann::json::array())) {
    Check c;
    c.name = cj.at("name").get<std::string>();
    c.kind = kind_from(cj.at("kind").get<std::string>());
    c.estimate = get_number(cj, "estimate");
    c.target = get_number(cj, "target");
    c.tolerance = get_number(cj, "tolerance");
    c.std_error = get_number(cj, "stderr");
    c.n = cj.value("n", std::size_t{0});
    c.passed = cj.at("passed").get<bool>();
    r.checks.push_back(std::move(c));
  }
  for (const auto& dj : j.value("diagnostics", nlohmann::json::array())) {
    r.diagnostics.push_back({dj.at("name").get<std::string>(), get_number(dj, "value")});
  }
  r.inconclusive_reasons = j.value("inconclusive_reasons", std::vector<std::string>{});
  r.note = j.value("note", "");
  return r;
}

std::string reports_to_json(std::span<const ExperimentReport> reports) {
  ordered_json arr = ordered_json::array();
  for (const auto& r : reports) arr.push_back(to_json(r));
  return arr.dump(2) + "\n";
}

std::vector<ExperimentReport> reports_from_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  const nlohmann::json& arr = j.is_object() && j.contains("reports") ? j.at("reports") : j;
  if (!arr.is_array()) throw std::invalid_argument("report JSON must be an array of reports");
  std::vector<ExperimentReport> out;
  for (const auto& e : arr) out.push_back(report_from_json(e));
  return out;
}

std::string summary_json(std::span<const ExperimentReport> reports) {
  std::size_t pass = 0;
  std::size_t fail = 0;
  std::size_t inconclusive = 0;
  ordered_json arr = ordered_json::array();
  for (const auto& r : reports) {
    switch (r.verdict) {
      case Verdict::pass:
        ++pass;
        break;
      case Verdict::fail:
        ++fail;
        break;
      case Verdict::inconclusive:
        ++inconclusive;
        break;
    }
    arr.push_back(to_json(r));
  }
  ordered_json j;
  j["summary"] = {{"experiments", reports.size()},
                  {"pass", pass},
                  {"fail", fail},
                  {"inconclusive", inconclusive},
                  {"exit_status", exit_status(reports)}};
  j["reports"] = std::move(arr);
  return j.dump(2) + "\n";
}

std::string format_table(std::span<const ExperimentReport> reports) {
  std::ostringstream os;
  char line[512];
  std::snprintf(line, sizeof line, "%-18s %-36s %12s %12s %10s %12s  %s\n", "experiment", "check",
                "estimate", "target", "rule", "tolerance", "result");
  os << line;
  for (const auto& r : reports) {
    for (const auto& c : r.checks) {
      std::snprintf(line, sizeof line, "%-18s %-36s %12s %12s %10s %12s  %s\n", r.name.c_str(),
                    c.name.c_str(), format_g6(c.estimate).c_str(), format_g6(c.target).c_str(),
                    std::string(to_string(c.kind)).c_str(), format_g6(c.tolerance).c_str(),
                    c.passed ? "ok" : "FAIL");
      os << line;
    }
    std::snprintf(line, sizeof line, "%-18s verdict: %s", r.name.c_str(),
                  std::string(to_string(r.verdict)).c_str());
    os << line;
    for (const auto& why : r.inconclusive_reasons) os << " (" << why << ")";
    os << "\n";
  }
  return os.str();
}

int exit_status(std::span<const ExperimentReport> reports) {
  bool any_fail = false;
  bool any_inconclusive = false;
  for (const auto& r : reports) {
    any_fail = any_fail || r.verdict == Verdict::fail;
    any_inconclusive = any_inconclusive || r.verdict == Verdict::inconclusive;
  }
  if (any_fail) return 4;
  if (any_inconclusive) return 3;
  return 0;
}

CsvWriter::CsvWriter(std::ostream& os, std::vector<std::string> header)
    : os_(os), columns_(header.size()) {
  for (std::size_t i = 0; i < header.size(); ++i) os_ << (i ? "," : "") << header[i];
  os_ << "\n";
}

CsvWriter& CsvWriter::cell(const std::string& s) {
  if (filled_ >= columns_) throw std::logic_error("CsvWriter: too many cells in row");
  os_ << (filled_++ ? "," : "") << s;
  return *this;
}

CsvWriter& CsvWriter::cell(long long v) { return cell(std::to_string(v)); }

CsvWriter& CsvWriter::cell(std::uint64_t v) { return cell(std::to_string(v)); }

CsvWriter& CsvWriter::cell(double v) { return cell(format_g6(v)); }

void CsvWriter::end_row() {
  if (filled_ != columns_) throw std::logic_error("CsvWriter: row has the wrong number of cells");
  os_ << "\n";
  filled_ = 0;
}

}  // namespace windings
