// fragsim: simulate ranked fragmentations and run verification suites.
//
//   fragsim simulate --config <path> [--out <dir>] [--seed <u64>] [--replicas <n>]
//   fragsim verify <suite> [--config <path>] [--seed <u64>] [--replicas <n>] [--threads <n>]
//   fragsim tail --measure <spec> --x <grid>
//
// Exit codes: 0 pass, 1 check failure, 2 configuration error.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "fragsim/config.hpp"
#include "fragsim/csv.hpp"
#include "fragsim/error.hpp"
#include "fragsim/measures.hpp"
#include "fragsim/simulator.hpp"
#include "fragsim/suites.hpp"
#include "fragsim/text.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;

struct CommonOverrides {
  std::string config_path;
  std::string seed;
  std::string replicas;
};

fragsim::Config load_config(const CommonOverrides& o) {
  fragsim::Config cfg = o.config_path.empty() ? fragsim::Config{} : fragsim::Config::load(o.config_path);
  if (!o.seed.empty()) cfg.set("seed", o.seed);
  if (!o.replicas.empty()) cfg.set("replicas", o.replicas);
  return cfg;
}

int cmd_simulate(const CommonOverrides& o, const std::string& out_dir) {
  const fragsim::Config cfg = load_config(o);
  const fragsim::SimConfig sim = cfg.sim(fragsim::SimConfig{});
  sim.validate();
  const std::uint64_t replicas = cfg.get_u64("replicas", 1);
  std::filesystem::create_directories(out_dir);
  for (std::uint64_t i = 0; i < replicas; ++i) {
    fragsim::Rng rng = fragsim::Rng::stream(sim.seed, i);
    const fragsim::Trajectory traj = fragsim::simulate(sim, rng);
    const auto stem = std::filesystem::path(out_dir);
    std::ofstream events(stem / ("events_" + std::to_string(i) + ".csv"));
    std::ofstream snaps(stem / ("snapshots_" + std::to_string(i) + ".csv"));
    fragsim::write_events_csv(events, traj);
    fragsim::write_snapshots_csv(snaps, traj);
    std::cout << "replica " << i << ": " << traj.events.size() << " events, lambda1(t_end) = "
              << fragsim::text::format_shortest(traj.snapshots.empty() ? 0.0 : traj.snapshots.back().rank(1))
              << (traj.cap_hit ? " [fragment cap hit]" : "") << '\n';
  }
  return kExitPass;
}

int cmd_verify(const CommonOverrides& o, const std::string& suite, unsigned threads, bool timings,
               const std::string& report_path) {
  const fragsim::Config cfg = load_config(o);
  const fragsim::SuiteReport report = fragsim::run_suite(suite, cfg, {threads});
  const std::string json = report.to_json(timings);
  if (report_path.empty()) {
    std::cout << json;
  } else {
    std::ofstream(report_path) << json;
  }
  std::cerr << report.summary();
  return report.pass ? kExitPass : kExitFail;
}

int cmd_tail(const std::string& measure, const std::string& grid) {
  const fragsim::DislocationLaw law = fragsim::parse_measure(measure);
  const auto xs = fragsim::text::parse_double_list(grid, "x");
  std::cout << "# " << law.describe() << '\n';
  std::cout << "# dust_integral = " << fragsim::text::format_shortest(fragsim::dust_integral(law)) << '\n';
  std::cout << "x,tail_nu2,gen_inverse_f\n";
  for (double x : xs) {
    std::cout << fragsim::text::format_shortest(x) << ',' << fragsim::text::format_shortest(fragsim::tail_nu2(law, x)) << ','
              << fragsim::text::format_shortest(fragsim::gen_inverse_f(law, x)) << '\n';
  }
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ranked fragmentation simulator and verification harness"};
  app.require_subcommand(1);

  CommonOverrides sim_opts;
  std::string out_dir = ".";
  auto* simulate = app.add_subcommand("simulate", "Simulate trajectories and write event/snapshot CSV files");
  simulate->add_option("--config", sim_opts.config_path, "Configuration file")->required();
  simulate->add_option("--out", out_dir, "Output directory");
  simulate->add_option("--seed", sim_opts.seed, "Master seed");
  simulate->add_option("--replicas", sim_opts.replicas, "Number of trajectories");

  CommonOverrides verify_opts;
  std::string suite;
  unsigned threads = 0;
  bool timings = false;
  std::string report_path;
  auto* verify = app.add_subcommand("verify", "Run a verification suite and print its report");
  verify->add_option("suite", suite, "Suite name")->required();
  verify->add_option("--config", verify_opts.config_path, "Configuration file (suite defaults otherwise)");
  verify->add_option("--seed", verify_opts.seed, "Master seed");
  verify->add_option("--replicas", verify_opts.replicas, "Number of replicas");
  verify->add_option("--threads", threads, "Worker threads (overrides FRAGSIM_THREADS)");
  verify->add_flag("--timings", timings, "Include wall times in the report");
  verify->add_option("--report", report_path, "Write the JSON report to this file instead of stdout");

  std::string measure;
  std::string grid;
  auto* tail = app.add_subcommand("tail", "Print nu2bar, its generalized inverse and the dust integral");
  tail->add_option("--measure", measure, "Measure, e.g. 'measure = binary_power; a = 0.5'")->required();
  tail->add_option("--x", grid, "Comma-separated grid")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitConfig;
  }

  try {
    if (*simulate) return cmd_simulate(sim_opts, out_dir);
    if (*verify) return cmd_verify(verify_opts, suite, threads, timings, report_path);
    if (*tail) return cmd_tail(measure, grid);
  } catch (const fragsim::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitConfig;
}
