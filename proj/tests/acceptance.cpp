// Acceptance run: one line per criterion, tolerances pinned here.
//
// Exit status is 0 when every failing criterion is listed in kKnownFailures,
// 1 otherwise. Known failures still print FAIL.

#include "windings/analytic.hpp"
#include "windings/report_io.hpp"
#include "windings/verify.hpp"

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace windings;
namespace fs = std::filesystem;

namespace {

const std::set<int> kKnownFailures = {5};

struct Line {
  int id = 0;
  std::string verdict;  // PASS, FAIL or INCONCLUSIVE
  std::string detail;
};

std::vector<Line> lines;

void emit(int id, const std::string& verdict, const std::string& detail) {
  lines.push_back({id, verdict, detail});
  std::printf("criterion %2d: %-12s %s\n", id, verdict.c_str(), detail.c_str());
  std::fflush(stdout);
}

std::string g(double v) { return format_g6(v); }

const ExperimentReport& find(const std::vector<ExperimentReport>& reports, const std::string& name) {
  for (const auto& r : reports) {
    if (r.name == name) return r;
  }
  throw std::runtime_error("missing report " + name);
}

const Check& check(const ExperimentReport& r, const std::string& name) {
  for (const auto& c : r.checks) {
    if (c.name == name) return c;
  }
  throw std::runtime_error("missing check " + r.name + "/" + name);
}

double diagnostic(const ExperimentReport& r, const std::string& name) {
  for (const auto& d : r.diagnostics) {
    if (d.name == name) return d.value;
  }
  throw std::runtime_error("missing diagnostic " + r.name + "/" + name);
}

bool within_k_se(const Check& c, double target, double k) {
  return std::abs(c.estimate - target) <= k * c.std_error;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(WINDINGS_CLI) + " " + args + " > /dev/null 2>&1";
  const int raw = std::system(cmd.c_str());
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void criterion_1() {
  const auto start = std::chrono::steady_clock::now();
  double fm_err = 0.0;
  for (int m = 1; m <= 50; ++m) {
    for (double x : {1e-8, 1e-4, 0.01, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 100.0, 1e4}) {
      const double ref = 1.0 / std::cosh(m * std::sqrt(phi(x)));
      fm_err = std::max(fm_err, std::abs(f_m(x, m) / ref - 1.0));
    }
  }
  double ggc_err = 0.0;
  for (int m = 1; m <= 30; ++m) {
    const auto spec = ggc_coeffs(m);
    for (double x : {0.0, 0.01, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 100.0}) {
      ggc_err = std::max(ggc_err, std::abs(ggc_laplace(spec, x) / f_m(x, m) - 1.0));
    }
  }
  double psi_err = 0.0;
  for (double x : {0.0, 0.01, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 100.0}) {
    psi_err = std::max(psi_err, std::abs(psi(x, PsiKind::two, 2.0) - std::log1p(2.0 * x)));
  }
  const auto cc = cone_constants(1.0);
  const double ratio = cc.k_alpha / cc.r_alpha;
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool ok = fm_err <= 1e-12 && ggc_err <= 1e-10 && psi_err <= 1e-12 && std::abs(ratio - 1.0) <= 1e-3 && secs < 1.0;
  emit(1, ok ? "PASS" : "FAIL",
       "f_m rel err " + g(fm_err) + " (<=1e-12), ggc rel err " + g(ggc_err) + " (<=1e-10), psi2 err " + g(psi_err) +
           ", k(1)/r(1) " + g(ratio) + " (1 +- 1e-3), " + g(secs) + "s (<1s)");
}

void criterion_2(const std::vector<ExperimentReport>& reps) {
  const auto& r = find(reps, "bougerol");
  bool ok = r.n_paths == 10000 && r.dt == 1e-3 && r.runtime_seconds <= 120.0;
  std::string d;
  for (const char* t : {"0.5", "1", "2"}) {
    const auto& c = check(r, std::string("ks_sinh_beta_vs_sqrtA_N_t=") + t);
    ok = ok && c.estimate < 0.0289;
    d += "t=" + std::string(t) + " KS " + g(c.estimate) + ", ";
  }
  emit(2, ok ? "PASS" : "FAIL", d + "threshold 0.0289, N " + std::to_string(r.n_paths) + ", " + g(r.runtime_seconds) + "s (<=120s)");
}

void criterion_3(const std::vector<ExperimentReport>& reps) {
  bool ok = true;
  std::string d;
  double secs = 0.0;
  const double pi = std::acos(-1.0);
  struct Spec {
    const char* name;
    const char* prefix;
    GltKind kind;
    GltParams params;
  };
  for (const Spec& s : {Spec{"glt_single", "glt1_x=", GltKind::single, {1.0, 1.0}},
                        Spec{"glt_double", "glt2_x=", GltKind::double_barrier, {pi / 4, 1.0}},
                        Spec{"dufresne", "dufresne_x=", GltKind::dufresne, {1.0, 1.0}}}) {
    const auto& r = find(reps, s.name);
    secs += r.runtime_seconds;
    ok = ok && r.n_paths >= 100000;
    double worst = 0.0;
    for (const char* x : {"0", "0.5", "1", "2"}) {
      const auto& c = check(r, std::string(s.prefix) + x);
      const double target = glt_rhs(s.kind, std::stod(x), s.params);
      ok = ok && within_k_se(c, target, 3.0);
      worst = std::max(worst, std::abs(c.estimate - target) / c.std_error);
      if (s.kind != GltKind::dufresne && std::string(x) == "0") {
        ok = ok && c.estimate - 3 * c.std_error <= 1.0 && 1.0 <= c.estimate + 3 * c.std_error;
      }
    }
    d += std::string(s.name) + " max |z| " + g(worst) + ", ";
  }
  ok = ok && secs <= 300.0;
  emit(3, ok ? "PASS" : "FAIL", d + "bound 3 SE, " + g(secs) + "s (<=300s)");
}

void criterion_4(const std::vector<ExperimentReport>& reps) {
  const auto& r = find(reps, "h5");
  const auto& ks = check(r, "ks_clock_vs_first_passage");
  const auto& p = check(r, "P(H<=1)");
  const double target = first_passage_cdf(std::asinh(1.0), 1.0);
  const bool ok = ks.estimate <= ks.tolerance && within_k_se(p, target, 3.0) && r.n_paths == 10000;
  emit(4, ok ? "PASS" : "FAIL",
       "KS " + g(ks.estimate) + " (threshold " + g(ks.tolerance) + "), P(H<=1) " + g(p.estimate) + " +- " +
           g(p.std_error) + " vs " + g(target));
}

void criterion_5(const std::vector<ExperimentReport>& reps) {
  const auto& r = find(reps, "deblassie");
  const auto& c = check(r, "loglog_slope_e3_e4_lambda=2");
  const bool ok = c.estimate <= -2.0 && r.n_paths >= 1000000 && r.runtime_seconds <= 600.0;
  emit(5, ok ? "PASS" : "FAIL",
       "slope on [e^3, e^4] " + g(c.estimate) + " (<= -2), N " + std::to_string(r.n_paths) + ", " +
           g(r.runtime_seconds) + "s (<=600s)");
}

void criterion_6(const std::vector<ExperimentReport>& reps) {
  const auto& r = find(reps, "spitzer_bm");
  const auto& p = check(r, "P(2theta/log t<=1)");
  const auto& m = check(r, "median(2theta/log t)");
  const double retention = diagnostic(r, "retention");
  const bool ok = std::abs(p.estimate - 0.75) <= 0.02 && std::abs(m.estimate) <= 0.05;
  std::string v = ok ? "PASS" : "FAIL";
  if (retention < 0.8) v = "INCONCLUSIVE";
  emit(6, v,
       "P(<=1) " + g(p.estimate) + " (0.75 +- 0.02), median " + g(m.estimate) + " (0 +- 0.05), retention " +
           g(retention) + ", retained " + g(diagnostic(r, "retained_paths")));
}

void criterion_7(const std::vector<ExperimentReport>& reps) {
  const auto& r = find(reps, "kalpha_variance");
  const auto& c = check(r, "var/u_at_u=0.5");
  const double k = cone_constants(1.0).k_alpha;
  const bool ok = std::abs(c.estimate - k) <= 0.10 * k && r.n_paths == 10000 && r.runtime_seconds <= 600.0;
  emit(7, ok ? "PASS" : "FAIL",
       "Var/u " + g(c.estimate) + " vs k(1) " + g(k) + " (10%), " + g(r.runtime_seconds) + "s (<=600s)");
}

void criterion_8(const std::vector<ExperimentReport>& reps) {
  const auto& r = find(reps, "stable_asymptotic");
  const auto& c = check(r, "median_(1/t)log_T");
  const double target = 1.0 / (cone_constants(1.0).r_alpha * 0.454936);
  const bool ok = std::abs(c.estimate - target) <= 0.15 * target;
  emit(8, ok ? "PASS" : "FAIL", "median " + g(c.estimate) + " vs " + g(target) + " (15%)");
}

void criterion_9(const std::vector<ExperimentReport>& reps) {
  const auto& r = find(reps, "yor_exptime");
  const auto& c = check(r, "ks_A_T_vs_Q/(2G_b)");
  const bool ok = c.estimate <= c.tolerance && r.n_paths == 10000;
  emit(9, ok ? "PASS" : "FAIL", "KS " + g(c.estimate) + " (threshold " + g(c.tolerance) + "), N " + std::to_string(r.n_paths));
}

void criterion_10(const std::vector<ExperimentReport>& reps) {
  const auto& r = find(reps, "asian_k0");
  const auto& c = check(r, "price_K=0");
  const auto& mono = check(r, "monotone_in_K");
  const double target = std::expm1(2.0) / 2.0;
  const bool ok = within_k_se(c, target, 3.0) && mono.passed && r.n_paths == 100000;
  emit(10, ok ? "PASS" : "FAIL",
       "price " + g(c.estimate) + " +- " + g(c.std_error) + " vs " + g(target) + " (3 SE), monotone " +
           (mono.passed ? "yes" : "no"));
}

void criterion_11(const std::string& in_process) {
  const fs::path base = fs::temp_directory_path() / "windings_acceptance";
  fs::remove_all(base);
  const int s1 = run_cli("verify --suite all --seed 42 --out " + (base / "p1").string());
  const int s8 = run_cli("verify --suite all --seed 42 --parallelism 8 --out " + (base / "p8").string());
  const std::string a = slurp(base / "p1" / "report.json");
  const std::string b = slurp(base / "p8" / "report.json");
  const bool twice = !a.empty() && a == in_process;
  const bool threads = !b.empty() && a == b;
  emit(11, twice && threads ? "PASS" : "FAIL",
       std::string("two runs byte-identical: ") + (twice ? "yes" : "no") + ", parallelism 1 vs 8 identical: " +
           (threads ? "yes" : "no") + " (exit " + std::to_string(s1) + "/" + std::to_string(s8) + ")");
}

}  // namespace

int main() {
  try {
    criterion_1();
    RunConfig cfg;
    cfg.seed = 42;
    const auto reports = run_suite({}, cfg);
    for (const auto& r : reports) {
      std::printf("  %-18s %-12s %8.1fs\n", r.name.c_str(), std::string(to_string(r.verdict)).c_str(), r.runtime_seconds);
    }
    criterion_2(reports);
    criterion_3(reports);
    criterion_4(reports);
    criterion_5(reports);
    criterion_6(reports);
    criterion_7(reports);
    criterion_8(reports);
    criterion_9(reports);
    criterion_10(reports);
    criterion_11(reports_to_json(reports));
  } catch (const std::exception& e) {
    std::printf("acceptance aborted: %s\n", e.what());
    return 1;
  }
  int unexpected = 0;
  int passed = 0;
  for (const auto& l : lines) {
    if (l.verdict == "PASS") ++passed;
    if (l.verdict == "FAIL" && !kKnownFailures.count(l.id)) ++unexpected;
  }
  std::printf("%d of %zu criteria pass; unexpected failures: %d\n", passed, lines.size(), unexpected);
  return unexpected == 0 ? 0 : 1;
}
