#pragma once

// Registry of named experiments. Each one binds a single identity or limit
// law to the samplers and engines, evaluates it against an analytic oracle,
// and reports a verdict.

#include "windings/stats.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace windings {

enum class Verdict { pass, fail, inconclusive };

std::string_view to_string(Verdict v);

// One comparison inside an experiment.
//   within_se:  |estimate - target| <= tolerance * std_error
//   within_abs: |estimate - target| <= tolerance
//   within_rel: |estimate - target| <= tolerance * |target|
//   ks:         estimate (KS statistic) <= tolerance (threshold)
//   at_most:    estimate <= target
//   at_least:   estimate >= target
enum class CheckKind { within_se, within_abs, within_rel, ks, at_most, at_least };

std::string_view to_string(CheckKind k);

struct Check {
  std::string name;
  CheckKind kind = CheckKind::within_se;
  double estimate = 0.0;
  double target = 0.0;
  double tolerance = 0.0;
  double std_error = 0.0;
  std::size_t n = 0;
  bool passed = false;
};

Check make_check(std::string name, CheckKind kind, double estimate, double target,
                 double tolerance, double std_error = 0.0, std::size_t n = 0);
Check se_check(std::string name, const McEstimate& est, double target, double k = 3.0);
Check ks_check(std::string name, const KsResult& ks, std::size_t n);

struct Diagnostic {
  std::string name;
  double value = 0.0;
};

struct ExperimentReport {
  std::string name;
  std::string claim;
  std::uint64_t seed = 0;
  std::size_t n_paths = 0;
  double dt = 0.0;
  std::vector<Check> checks;  // checks.front() is the headline comparison
  std::vector<Diagnostic> diagnostics;
  // Set when a budget or effective-size limit makes the run unreliable.
  std::vector<std::string> inconclusive_reasons;
  std::string note;
  Verdict verdict = Verdict::fail;
  double runtime_seconds = 0.0;  // wall clock, kept out of the JSON payload
};

// pass iff every check passed and nothing was flagged inconclusive; any failed
// check makes it fail.
Verdict decide(const ExperimentReport& report);

struct RunConfig {
  std::uint64_t seed = 42;
  std::optional<std::size_t> n_paths;
  std::optional<double> dt;
  std::size_t parallelism = 1;
  std::map<std::string, double> params;
};

// What an experiment body sees: its own seed and resolved settings.
class ExperimentContext {
 public:
  ExperimentContext(std::uint64_t seed, std::size_t n_paths, double dt, std::size_t parallelism,
                    std::map<std::string, double> params);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t seed(std::string_view part) const;
  std::size_t n_paths() const { return n_paths_; }
  double dt() const { return dt_; }
  std::size_t parallelism() const { return parallelism_; }
  double param(const std::string& key) const;

 private:
  std::uint64_t seed_;
  std::size_t n_paths_;
  double dt_;
  std::size_t parallelism_;
  std::map<std::string, double> params_;
};

struct ExperimentInfo {
  std::string name;
  std::string claim;
  std::vector<std::string> tags;
  std::size_t default_paths = 0;
  double default_dt = 0.0;
  std::map<std::string, double> default_params;
  std::function<void(const ExperimentContext&, ExperimentReport&)> body;
};

// Sorted by name.
const std::vector<ExperimentInfo>& registry();
const ExperimentInfo* find_experiment(std::string_view name);

// Throws std::invalid_argument for an unknown name or for a parameter the
// experiment does not declare.
ExperimentReport run_experiment(std::string_view name, const RunConfig& config);

// `filter` holds experiment names or tags; empty or {"all"} selects all.
// Parameters are applied to every selected experiment that declares them; a
// parameter no selected experiment declares is rejected.
std::vector<ExperimentReport> run_suite(const std::vector<std::string>& filter,
                                        const RunConfig& config);

std::vector<const ExperimentInfo*> select_experiments(const std::vector<std::string>& filter);

}  // namespace windings
