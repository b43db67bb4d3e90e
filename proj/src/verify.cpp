#include "windings/verify.hpp"

#include "experiments.hpp"
#include "windings/rng.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>
#include <stdexcept>

namespace windings {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::pass:
      return "pass";
    case Verdict::fail:
      return "fail";
    case Verdict::inconclusive:
      return "inconclusive";
  }
  return "fail";
}

std::string_view to_string(CheckKind k) {
  switch (k) {
    case CheckKind::within_se:
      return "within_se";
    case CheckKind::within_abs:
      return "within_abs";
    case CheckKind::within_rel:
      return "within_rel";
    case CheckKind::ks:
      return "ks";
    case CheckKind::at_most:
      return "at_most";
    case CheckKind::at_least:
      return "at_least";
  }
  return "within_abs";
}

Check make_check(std::string name, CheckKind kind, double estimate, double target,
                 double tolerance, double std_error, std::size_t n) {
  Check c;
  c.name = std::move(name);
  c.kind = kind;
  c.estimate = estimate;
  c.target = target;
  c.tolerance = tolerance;
  c.std_error = std_error;
  c.n = n;
  const double gap = std::abs(estimate - target);
  switch (kind) {
    case CheckKind::within_se:
      c.passed = gap <= tolerance * std_error;
      break;
    case CheckKind::within_abs:
      c.passed = gap <= tolerance;
      break;
    case CheckKind::within_rel:
      c.passed = gap <= tolerance * std::abs(target);
      break;
    case CheckKind::ks:
      c.passed = estimate <= tolerance;
      break;
    case CheckKind::at_most:
      c.passed = estimate <= target;
      break;
    case CheckKind::at_least:
      c.passed = estimate >= target;
      break;
  }
  if (!std::isfinite(estimate)) c.passed = false;
  return c;
}

Check se_check(std::string name, const McEstimate& est, double target, double k) {
  return make_check(std::move(name), CheckKind::within_se, est.mean, target, k, est.std_error,
                    est.n);
}

Check ks_check(std::string name, const KsResult& ks, std::size_t n) {
  return make_check(std::move(name), CheckKind::ks, ks.statistic, 0.0, ks.threshold, 0.0, n);
}

Verdict decide(const ExperimentReport& report) {
  if (report.checks.empty()) return Verdict::inconclusive;
  const bool all_pass = std::all_of(report.checks.begin(), report.checks.end(),
                                    [](const Check& c) { return c.passed; });
  if (!report.inconclusive_reasons.empty()) return Verdict::inconclusive;
  return all_pass ? Verdict::pass : Verdict::fail;
}

ExperimentContext::ExperimentContext(std::uint64_t seed, std::size_t n_paths, double dt,
                                     std::size_t parallelism, std::map<std::string, double> params)
    : seed_(seed),
      n_paths_(n_paths),
      dt_(dt),
      parallelism_(std::max<std::size_t>(1, parallelism)),
      params_(std::move(params)) {}

std::uint64_t ExperimentContext::seed(std::string_view part) const {
  return derive_seed(seed_, part);
}

double ExperimentContext::param(const std::string& key) const {
  const auto it = params_.find(key);
  if (it == params_.end()) throw std::invalid_argument("experiment parameter not declared: " + key);
  return it->second;
}

const std::vector<ExperimentInfo>& registry() {
  static const std::vector<ExperimentInfo> entries = [] {
    auto v = detail::build_registry();
    std::sort(v.begin(), v.end(),
              [](const ExperimentInfo& a, const ExperimentInfo& b) { return a.name < b.name; });
    return v;
  }();
  return entries;
}

const ExperimentInfo* find_experiment(std::string_view name) {
  for (const auto& e : registry()) {
    if (e.name == name) return &e;
  }
  return nullptr;
}

namespace {

ExperimentReport run_one(const ExperimentInfo& info, const RunConfig& config, bool strict_params) {
  std::map<std::string, double> params = info.default_params;
  for (const auto& [key, value] : config.params) {
    auto it = params.find(key);
    if (it == params.end()) {
      if (strict_params) {
        throw std::invalid_argument("experiment " + info.name + " has no parameter " + key);
      }
      continue;
    }
    it->second = value;
  }
  const std::size_t n_paths = config.n_paths.value_or(info.default_paths);
  const double dt = config.dt.value_or(info.default_dt);
  if (n_paths < 2) throw std::invalid_argument("n_paths must be at least 2");
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  ExperimentContext ctx(derive_seed(config.seed, info.name), n_paths, dt, config.parallelism,
                        params);
  ExperimentReport report;
  report.name = info.name;
  report.claim = info.claim;
  report.seed = ctx.seed();
  report.n_paths = n_paths;
  report.dt = dt;
  const auto start = std::chrono::steady_clock::now();
  info.body(ctx, report);
  report.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  report.verdict = decide(report);
  return report;
}

}  // namespace

ExperimentReport run_experiment(std::string_view name, const RunConfig& config) {
  const ExperimentInfo* info = find_experiment(name);
  if (info == nullptr) throw std::invalid_argument("unknown experiment: " + std::string(name));
  return run_one(*info, config, true);
}

std::vector<const ExperimentInfo*> select_experiments(const std::vector<std::string>& filter) {
  std::vector<const ExperimentInfo*> out;
  const bool all = filter.empty() || std::find(filter.begin(), filter.end(), "all") != filter.end();
  for (const std::string& f : filter) {
    if (f == "all") continue;
    const bool known = std::any_of(registry().begin(), registry().end(), [&](const ExperimentInfo& e) {
      return e.name == f || std::find(e.tags.begin(), e.tags.end(), f) != e.tags.end();
    });
    if (!known) throw std::invalid_argument("unknown experiment or tag: " + f);
  }
  for (const auto& e : registry()) {
    const bool hit = all || std::any_of(filter.begin(), filter.end(), [&](const std::string& f) {
                       return e.name == f || std::find(e.tags.begin(), e.tags.end(), f) != e.tags.end();
                     });
    if (hit) out.push_back(&e);
  }
  return out;
}

std::vector<ExperimentReport> run_suite(const std::vector<std::string>& filter,
                                        const RunConfig& config) {
  const auto selected = select_experiments(filter);
  std::set<std::string> declared;
  for (const auto* e : selected) {
    for (const auto& [key, value] : e->default_params) declared.insert(key);
  }
  for (const auto& [key, value] : config.params) {
    if (!declared.count(key)) {
      throw std::invalid_argument("no selected experiment has parameter " + key);
    }
  }
  std::vector<ExperimentReport> out;
  out.reserve(selected.size());
  for (const auto* e : selected) out.push_back(run_one(*e, config, false));
  return out;
}

}  // namespace windings
