#include "windings/report_io.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <limits>
#include <sstream>

using namespace windings;

namespace {

ExperimentReport sample_report() {
  ExperimentReport r;
  r.name = "demo";
  r.claim = "E[X] = 1";
  r.seed = 42;
  r.n_paths = 1000;
  r.dt = 1e-3;
  r.checks.push_back(make_check("mean", CheckKind::within_se, 1.01, 1.0, 3.0, 0.01, 1000));
  r.checks.push_back(make_check("tail", CheckKind::at_most, -2.5, -2.0, 0.0));
  r.diagnostics.push_back({"ess", 812.5});
  r.diagnostics.push_back({"undefined", std::numeric_limits<double>::quiet_NaN()});
  r.note = "plain";
  r.verdict = decide(r);
  r.runtime_seconds = 1.25;
  return r;
}

}  // namespace

TEST_CASE("number formatting") {
  CHECK(format_g6(3.194528049465325) == "3.19453");
  CHECK(format_g6(1e-7) == "1e-07");
  CHECK(format_hex(0.1) == "0x1.999999999999ap-4");
  CHECK(std::strtod(format_hex(3.194528049465325).c_str(), nullptr) == 3.194528049465325);
}

TEST_CASE("json round trip") {
  const auto r = sample_report();
  const auto j = to_json(r);
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  CHECK(keys == std::vector<std::string>{"name", "claim", "verdict", "seed", "n_paths", "dt", "target", "estimate",
                                         "tolerance", "checks", "diagnostics", "inconclusive_reasons", "note"});
  CHECK(j["verdict"] == "pass");
  CHECK(j["diagnostics"][1]["value"].is_null());
  CHECK_FALSE(j.contains("runtime_seconds"));
  const std::vector<ExperimentReport> v{r};
  const auto text = reports_to_json(v);
  const auto back = reports_from_json(text);
  REQUIRE(back.size() == 1);
  CHECK(back[0].name == r.name);
  CHECK(back[0].checks.size() == 2);
  CHECK(back[0].checks[0].estimate == r.checks[0].estimate);
  CHECK(back[0].checks[1].kind == CheckKind::at_most);
  CHECK(std::isnan(back[0].diagnostics[1].value));
  CHECK(back[0].verdict == Verdict::pass);
  CHECK(reports_to_json(back) == text);
  CHECK_THROWS(reports_from_json("{\"x\": 1}"));
}

TEST_CASE("summary and exit status") {
  auto a = sample_report();
  auto b = sample_report();
  b.name = "other";
  const std::vector<ExperimentReport> ok{a, b};
  CHECK(exit_status(ok) == 0);
  b.verdict = Verdict::inconclusive;
  std::vector<ExperimentReport> mixed{a, b};
  CHECK(exit_status(mixed) == 3);
  a.verdict = Verdict::fail;
  mixed = {a, b};
  CHECK(exit_status(mixed) == 4);
  const auto s = nlohmann::json::parse(summary_json(mixed));
  CHECK(s["summary"]["experiments"] == 2);
  CHECK(s["summary"]["fail"] == 1);
  CHECK(s["summary"]["inconclusive"] == 1);
  CHECK(s["summary"]["exit_status"] == 4);
  CHECK(reports_from_json(summary_json(mixed)).size() == 2);
  const auto table = format_table(mixed);
  CHECK(table.find("demo") != std::string::npos);
  CHECK(table.find("verdict: fail") != std::string::npos);
  CHECK(table.find("FAIL") == std::string::npos);
}

TEST_CASE("csv writer") {
  std::ostringstream os;
  CsvWriter w(os, {"t", "K", "price"});
  w.cell(1.0).cell(0.0).cell(3.194528049465325).end_row();
  CHECK(os.str() == "t,K,price\n1,0,3.19453\n");
  w.cell(1.0);
  CHECK_THROWS_AS(w.end_row(), std::logic_error);
  CHECK_THROWS_AS(w.cell(1.0).cell(2.0).cell(3.0), std::logic_error);
}
