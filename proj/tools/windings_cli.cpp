// windings: simulate, verify, price, constants and report commands.

#include "windings/analytic.hpp"
#include "windings/bm_engine.hpp"
#include "windings/parallel.hpp"
#include "windings/report_io.hpp"
#include "windings/rng.hpp"
#include "windings/stable_engine.hpp"
#include "windings/verify.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace windings;

namespace {

constexpr int kExitIo = 1;
constexpr int kExitUsage = 2;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::uint64_t seed = 42;
  std::size_t paths = 0;
  double dt = 0.0;
  std::size_t parallelism = 1;
  std::string out = ".";
  std::vector<std::string> suite;
  std::vector<double> alpha;
  std::vector<double> t;
  std::vector<double> strike;
  std::vector<double> nu;
  std::vector<std::string> set;
  std::string config;
  std::string model = "bm_driver";
  std::vector<std::string> inputs;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<double> parse_doubles(const std::string& s, const std::string& key) {
  std::vector<double> out;
  for (const auto& item : split_list(s)) {
    std::size_t used = 0;
    const double v = std::stod(item, &used);
    if (used != item.size()) throw CLI::ValidationError(key, "not a number: " + item);
    out.push_back(v);
  }
  return out;
}

// Flat key=value file. Keys are the long flag names or param.NAME for an
// experiment parameter; values given on the command line take precedence.
void apply_config(const std::string& path, Options& o, const CLI::App& app) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file " + path);
  std::string line;
  int lineno = 0;
  const auto given = [&](const std::string& flag) { return app.count_all() > 0 && app.get_option(flag)->count() > 0; };
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw CLI::ValidationError("--config", path + ":" + std::to_string(lineno) + ": expected key=value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      if (key.rfind("param.", 0) == 0) {
        o.set.insert(o.set.begin(), key.substr(6) + "=" + value);
      } else if (key == "seed") {
        if (!given("--seed")) o.seed = std::stoull(value);
      } else if (key == "paths") {
        if (!given("--paths")) o.paths = std::stoull(value);
      } else if (key == "dt") {
        if (!given("--dt")) o.dt = std::stod(value);
      } else if (key == "parallelism") {
        if (!given("--parallelism")) o.parallelism = std::stoull(value);
      } else if (key == "out") {
        if (!given("--out")) o.out = value;
      } else if (key == "suite") {
        if (!given("--suite")) o.suite = split_list(value);
      } else if (key == "alpha") {
        if (!given("--alpha")) o.alpha = parse_doubles(value, key);
      } else if (key == "t") {
        if (!given("--t")) o.t = parse_doubles(value, key);
      } else if (key == "strike") {
        if (!given("--strike")) o.strike = parse_doubles(value, key);
      } else if (key == "nu") {
        if (!given("--nu")) o.nu = parse_doubles(value, key);
      } else if (key == "model") {
        if (!given("--model")) o.model = value;
      } else {
        throw CLI::ValidationError("--config", path + ":" + std::to_string(lineno) + ": unknown key " + key);
      }
    } catch (const std::logic_error&) {
      throw CLI::ValidationError("--config", path + ":" + std::to_string(lineno) + ": bad value for " + key);
    }
  }
}

std::map<std::string, double> parse_set(const std::vector<std::string>& items) {
  std::map<std::string, double> out;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw CLI::ValidationError("--set", "expected key=value: " + item);
    const std::string key = trim(item.substr(0, eq));
    const auto values = parse_doubles(item.substr(eq + 1), "--set");
    if (values.size() != 1) throw CLI::ValidationError("--set", "one value per key: " + item);
    out[key] = values.front();
  }
  return out;
}

void validate(const Options& o) {
  if (o.parallelism == 0) throw CLI::ValidationError("--parallelism", "must be positive");
  if (o.dt < 0.0) throw CLI::ValidationError("--dt", "must be positive");
}

fs::path prepare_out(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir + ": " + ec.message());
  return fs::path(dir);
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int cmd_verify(const Options& o) {
  RunConfig cfg;
  cfg.seed = o.seed;
  if (o.paths > 0) cfg.n_paths = o.paths;
  if (o.dt > 0.0) cfg.dt = o.dt;
  cfg.parallelism = o.parallelism;
  cfg.params = parse_set(o.set);
  if (!o.alpha.empty()) cfg.params["alpha"] = o.alpha.front();
  if (!o.t.empty()) cfg.params["t"] = o.t.front();
  if (!o.nu.empty()) cfg.params["nu"] = o.nu.front();
  std::vector<std::string> filter;
  for (const auto& s : o.suite) {
    for (const auto& part : split_list(s)) filter.push_back(part);
  }
  std::vector<ExperimentReport> reports;
  try {
    reports = run_suite(filter, cfg);
  } catch (const std::invalid_argument& e) {
    throw CLI::ValidationError("--suite", e.what());
  }
  const fs::path dir = prepare_out(o.out);
  write_file(dir / "report.json", reports_to_json(reports));
  std::cout << format_table(reports);
  for (const auto& r : reports) {
    std::fprintf(stderr, "%s: %.2fs\n", r.name.c_str(), r.runtime_seconds);
  }
  return exit_status(reports);
}

int cmd_price(const Options& o) {
  const std::vector<double> ts = o.t.empty() ? std::vector<double>{1.0} : o.t;
  const std::vector<double> ks = o.strike.empty() ? std::vector<double>{0.0} : o.strike;
  const std::vector<double> nus = o.nu.empty() ? std::vector<double>{0.0} : o.nu;
  const std::size_t n = o.paths > 0 ? o.paths : 100000;
  const double dt = o.dt > 0.0 ? o.dt : 1e-3;
  const fs::path dir = prepare_out(o.out);
  std::ostringstream csv;
  CsvWriter w(csv, {"t", "K", "nu", "price", "stderr", "n_paths", "seed", "price_hex", "stderr_hex"});
  for (double t : ts) {
    for (double nu : nus) {
      AsianSpec spec;
      spec.t = t;
      spec.nu = nu;
      spec.dt = dt;
      // Common random numbers across strikes for each (t, nu).
      const auto est = asian_call_grid(spec, ks, n, o.seed, o.parallelism);
      for (std::size_t j = 0; j < ks.size(); ++j) {
        w.cell(t).cell(ks[j]).cell(nu).cell(est[j].mean).cell(est[j].std_error);
        w.cell(static_cast<std::uint64_t>(2 * est[j].n)).cell(o.seed);
        w.cell(format_hex(est[j].mean)).cell(format_hex(est[j].std_error));
        w.end_row();
      }
    }
  }
  write_file(dir / "price.csv", csv.str());
  std::cout << csv.str();
  return 0;
}

int cmd_constants(const Options& o) {
  const std::vector<double> alphas = o.alpha.empty() ? std::vector<double>{0.5, 1.0, 1.5} : o.alpha;
  const fs::path dir = prepare_out(o.out);
  std::ostringstream csv;
  CsvWriter w(csv, {"alpha", "integral", "r_alpha", "k_alpha", "k_over_r", "gamma_ratio", "quad_error",
                    "r_alpha_hex", "k_alpha_hex"});
  for (double a : alphas) {
    ConeConstants c;
    try {
      c = cone_constants(a);
    } catch (const std::domain_error& e) {
      throw CLI::ValidationError("--alpha", e.what());
    }
    w.cell(a).cell(c.integral).cell(c.r_alpha).cell(c.k_alpha).cell(c.k_alpha / c.r_alpha);
    w.cell(cone_ratio(a)).cell(c.quad_error).cell(format_hex(c.r_alpha)).cell(format_hex(c.k_alpha));
    w.end_row();
  }
  write_file(dir / "constants.csv", csv.str());
  std::cout << csv.str();
  return 0;
}

int cmd_simulate(const Options& o) {
  const double t = o.t.empty() ? 1.0 : o.t.front();
  const double alpha = o.alpha.empty() ? 1.0 : o.alpha.front();
  const std::size_t n = o.paths > 0 ? o.paths : 1000;
  if (!(t > 0.0)) throw CLI::ValidationError("--t", "must be positive");
  struct Row {
    bool ok = false;
    double theta = 0.0;
    double log_radius = 0.0;
    double clock = 0.0;
    std::size_t jumps = 0;
  };
  std::vector<Row> rows;
  if (o.model == "bm_driver") {
    const double dt = o.dt > 0.0 ? o.dt : 1e-3;
    rows = parallel_map(n, o.parallelism, [&](std::size_t i) {
      RngStream rng(o.seed, i);
      const auto s = driver_state_at(t, dt, rng);
      return s ? Row{true, s->theta, s->log_radius, s->clock, 0} : Row{};
    });
  } else if (o.model == "bm_direct") {
    const double dt = o.dt > 0.0 ? o.dt : 1e-3;
    rows = parallel_map(n, o.parallelism, [&](std::size_t i) {
      RngStream rng(o.seed, i);
      WindingOptions w;
      w.t_max = t;
      w.dt_base = dt;
      const auto p = winding_direct(w, rng);
      if (!p) return Row{};
      return Row{true, p->theta.back(), std::log(std::abs(p->points.back())), p->clock.back(), 0};
    });
  } else if (o.model == "stable") {
    const double dt = o.dt > 0.0 ? o.dt : 1e-3;
    rows = parallel_map(n, o.parallelism, [&](std::size_t i) {
      RngStream rng(o.seed, i);
      try {
        const StablePath p = simulate_stable(alpha, t, dt, rng);
        std::size_t jumps = 0;
        for (char f : p.jump_flags) jumps += f ? 1 : 0;
        return Row{true, p.theta.back(), std::log(std::abs(p.points.back())), p.clock.back(), jumps};
      } catch (const SegmentThroughOrigin&) {
        return Row{};
      }
    });
  } else {
    throw CLI::ValidationError("--model", "expected bm_driver, bm_direct or stable");
  }
  const fs::path dir = prepare_out(o.out);
  std::ostringstream csv;
  CsvWriter w(csv, {"path", "model", "t", "theta", "log_radius", "clock", "jumps", "theta_hex"});
  std::size_t rejected = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i].ok) {
      ++rejected;
      continue;
    }
    w.cell(static_cast<std::uint64_t>(i)).cell(o.model).cell(t).cell(rows[i].theta);
    w.cell(rows[i].log_radius).cell(rows[i].clock).cell(static_cast<std::uint64_t>(rows[i].jumps));
    w.cell(format_hex(rows[i].theta));
    w.end_row();
  }
  write_file(dir / "simulate.csv", csv.str());
  std::fprintf(stdout, "%zu paths written, %zu rejected\n", rows.size() - rejected, rejected);
  return 0;
}

int cmd_report(const Options& o) {
  if (o.inputs.empty()) throw CLI::ValidationError("report", "no input report files");
  std::vector<ExperimentReport> all;
  for (const auto& path : o.inputs) {
    std::vector<ExperimentReport> part;
    try {
      part = reports_from_json(read_file(path));
    } catch (const nlohmann::json::exception& e) {
      throw IoError(path + ": " + e.what());
    }
    all.insert(all.end(), part.begin(), part.end());
  }
  std::stable_sort(all.begin(), all.end(),
                   [](const ExperimentReport& a, const ExperimentReport& b) { return a.name < b.name; });
  const fs::path dir = prepare_out(o.out);
  write_file(dir / "summary.json", summary_json(all));
  std::cout << format_table(all);
  return exit_status(all);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Windings, cone exit times and exponential functionals: simulation and checks"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--seed", o.seed, "master seed");
  app.add_option("--paths", o.paths, "number of paths (overrides experiment defaults)")->check(CLI::PositiveNumber);
  app.add_option("--dt", o.dt, "time step (overrides experiment defaults)")->check(CLI::PositiveNumber);
  app.add_option("--parallelism", o.parallelism, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--out", o.out, "output directory");
  app.add_option("--suite", o.suite, "experiment names or tags, comma separated; default all")->delimiter(',');
  app.add_option("--alpha", o.alpha, "stability index, comma separated")->delimiter(',');
  app.add_option("--t", o.t, "horizon(s), comma separated")->delimiter(',');
  app.add_option("--strike", o.strike, "strike(s), comma separated")->delimiter(',');
  app.add_option("--nu", o.nu, "drift(s), comma separated")->delimiter(',');
  app.add_option("--set", o.set, "experiment parameter override key=value");
  app.add_option("--config", o.config, "key=value configuration file");
  app.add_option("--model", o.model, "simulate: bm_driver, bm_direct or stable");

  auto* simulate = app.add_subcommand("simulate", "path statistics CSV (theta, log radius, clock at t)");
  auto* verify = app.add_subcommand("verify", "run experiments, write report.json and print a table");
  auto* price = app.add_subcommand("price", "Asian call prices over the (t, K, nu) grid as CSV");
  auto* constants = app.add_subcommand("constants", "r(alpha), k(alpha) table");
  auto* report = app.add_subcommand("report", "merge report JSON files into summary.json");
  report->add_option("files", o.inputs, "report files")->required();

  try {
    app.parse(argc, argv);
    if (!o.config.empty()) apply_config(o.config, o, app);
    validate(o);
    if (simulate->parsed()) return cmd_simulate(o);
    if (verify->parsed()) return cmd_verify(o);
    if (price->parsed()) return cmd_price(o);
    if (constants->parsed()) return cmd_constants(o);
    if (report->parsed()) return cmd_report(o);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
