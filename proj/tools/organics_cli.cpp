// organics: run preset scenarios, analyze weight matrices, sweep all presets.

#include <organics/organics.hpp>

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace fs = std::filesystem;
using namespace organics;

namespace {

struct RunOptions {
  std::string scenario;
  std::string out_dir;
  std::optional<double> dt, duration;
  std::optional<std::uint64_t> seed;
  double tau_scale = 1.0;
  bool no_plot = false;
};

std::string default_out_dir() {
  const char* env = std::getenv("ORGANICS_OUT");
  return env && *env ? env : "out";
}

scenarios::Overrides overrides_of(const RunOptions& o) {
  scenarios::Overrides ov;
  ov.dt = o.dt;
  ov.duration = o.duration;
  ov.seed = o.seed;
  ov.tau_scale = o.tau_scale;
  return ov;
}

// Runs one scenario and writes its files. Returns the report text.
scenarios::ScenarioResult run_and_write(const std::string& name, const RunOptions& o) {
  auto res = scenarios::run_scenario(name, overrides_of(o));
  fs::create_directories(o.out_dir);
  const fs::path base = fs::path(o.out_dir) / name;
  io::write_csv(base.string() + "_trajectory.csv", res.table);
  {
    std::ofstream rep(base.string() + "_report.txt");
    if (!rep) throw io::IoError("cannot write report in '" + o.out_dir + "'");
    rep << res.report();
  }
  if (!o.no_plot) io::write_svg(base.string() + "_y.svg", res.plot_title, res.plot);
  return res;
}

int cmd_run(const RunOptions& o) {
  const auto res = run_and_write(o.scenario, o);
  std::cout << res.report();
  return res.passed() ? 0 : 1;
}

int cmd_sweep(const RunOptions& o, unsigned jobs) {
  const auto names = scenarios::scenario_names();
  std::vector<std::string> reports(names.size());
  std::vector<int> status(names.size(), 1);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < names.size();) {
      try {
        const auto res = run_and_write(names[i], o);
        reports[i] = res.report();
        status[i] = res.passed() ? 0 : 1;
      } catch (const std::exception& e) {
        reports[i] = "scenario: " + names[i] + "\nerror: " + e.what() + "\n";
      }
    }
  };
  jobs = std::clamp<unsigned>(jobs, 1, static_cast<unsigned>(names.size()));
  std::vector<std::thread> pool;
  for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  int failed = 0;
  for (std::size_t i = 0; i < names.size(); ++i) {
    std::cout << reports[i] << "\n";
    failed += status[i];
  }
  std::cout << "sweep: " << names.size() - static_cast<std::size_t>(failed) << "/" << names.size()
            << " scenarios passed\n";
  return failed == 0 ? 0 : 1;
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(io::parse_double(item));
  return out;
}

int cmd_analyze(const std::string& constructor, const std::string& weights_file, int n,
                const std::string& tau_list, std::uint64_t seed, bool as_json) {
  CMat w;
  if (!weights_file.empty()) {
    std::ifstream in(weights_file);
    if (!in) throw config::ConfigError("cannot open '" + weights_file + "'");
    config::json j;
    try {
      in >> j;
    } catch (const config::json::parse_error& e) {
      throw config::ConfigError("cannot parse '" + weights_file + "': " + e.what());
    }
    // Either a whole network config or a bare matrix.
    if (j.is_object() && (j.contains("weights") || j.contains("w_yy"))) {
      const auto& wj = j.contains("weights") ? j.at("weights") : j;
      w = config::matrix_from_json(wj.at("w_yy"), "w_yy");
    } else {
      w = config::matrix_from_json(j, "weights");
    }
  } else {
    config::json j{{"constructor", constructor}, {"n", n}, {"seed", seed}};
    w = config::construct_matrix(j);
  }
  if (w.rows() != w.cols()) throw DimensionError("recurrent matrix must be square");

  RVec tau = RVec::Constant(w.rows(), 10.0);
  if (!tau_list.empty()) {
    const auto t = parse_list(tau_list);
    if (t.size() == 1)
      tau.setConstant(t[0]);
    else if (static_cast<Eigen::Index>(t.size()) == w.rows())
      tau = Eigen::Map<const RVec>(t.data(), w.rows());
    else
      throw DimensionError("--tau needs 1 or " + std::to_string(w.rows()) + " values");
  }
  const SpectralReport r = analyze(w, tau);
  if (as_json) {
    std::cout << config::report_to_json(r).dump(2) << "\n";
    return 0;
  }
  std::cout << "neurons: " << w.rows() << "\n";
  std::cout << "eigenvalues:\n";
  for (Eigen::Index i = 0; i < r.eigenvalues.size(); ++i)
    std::cout << "  " << io::format_double(r.eigenvalues[i].real()) << " "
              << (r.eigenvalues[i].imag() < 0 ? "- " : "+ ") << io::format_double(std::abs(r.eigenvalues[i].imag()))
              << "i\n";
  std::cout << "dimensionality: " << r.dimensionality << "\n";
  std::cout << "stability: " << to_string(r.stability) << "\n";
  std::cout << "frequencies_hz:";
  if (r.frequencies_hz.empty()) std::cout << " none";
  for (double f : r.frequencies_hz) std::cout << " " << io::format_double(f);
  std::cout << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ORGaNICs simulator"};
  app.require_subcommand(1);

  RunOptions ro;
  ro.out_dir = default_out_dir();
  auto add_common = [&](CLI::App* c) {
    c->add_option("--out", ro.out_dir, "output directory (default $ORGANICS_OUT or ./out)");
    c->add_option("--dt", ro.dt, "integration step in ms")->check(CLI::PositiveNumber);
    c->add_option("--duration", ro.duration, "run length in ms")->check(CLI::PositiveNumber);
    c->add_option("--seed", ro.seed, "seed for random weights and inputs");
    c->add_option("--tau-scale", ro.tau_scale, "multiply every tau_y")->check(CLI::PositiveNumber);
    c->add_flag("--no-plot", ro.no_plot, "skip the SVG plot");
  };

  auto* run = app.add_subcommand("run", "run one preset scenario");
  run->add_option("--scenario", ro.scenario, "scenario name")->required();
  add_common(run);

  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
  auto* sweep = app.add_subcommand("sweep", "run every preset scenario");
  add_common(sweep);
  sweep->add_option("--jobs", jobs, "worker threads");

  std::string constructor, weights_file, tau_list;
  int n = 8;
  std::uint64_t seed = 1;
  bool as_json = false;
  auto* an = app.add_subcommand("analyze", "spectral report of a recurrent weight matrix");
  auto* c_opt = an->add_option("--constructor", constructor, "identity, center-surround, synfire, ei-pair, random-spectral");
  auto* w_opt = an->add_option("--weights", weights_file, "JSON file with a matrix or a network config");
  c_opt->excludes(w_opt);
  an->add_option("--n", n, "matrix size for sized constructors")->check(CLI::PositiveNumber);
  an->add_option("--tau", tau_list, "tau_y in ms, one value or a comma-separated list");
  an->add_option("--seed", seed, "seed for random-spectral");
  an->add_flag("--json", as_json, "print the report as JSON");

  auto* list = app.add_subcommand("list", "list scenario names");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(ro);
    if (*sweep) return cmd_sweep(ro, jobs);
    if (*list) {
      for (const auto& s : scenarios::registry()) std::cout << s.name << "  " << s.summary << "\n";
      return 0;
    }
    if (*an) {
      if (constructor.empty() && weights_file.empty()) {
        std::cerr << "analyze: give --constructor or --weights\n";
        return 2;
      }
      return cmd_analyze(constructor, weights_file, n, tau_list, seed, as_json);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
