// Benchmark runner for the poromechanics splitting schemes.

#include <cmath>
#include <exception>
#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "porosplit/bench.hpp"

namespace ps = porosplit;

int main(int argc, char** argv) {
  CLI::App app{"Monolithic and split solvers for linearized poromechanics benchmarks"};
  app.require_subcommand(1);

  std::string config_path;
  auto* run = app.add_subcommand("run", "Run a config and print one CSV row per (scheme, sweep value)");
  run->add_option("config", config_path, "key = value configuration file")->required()->check(CLI::ExistingFile);
  std::size_t run_jobs = 1;
  bool verbose = false;
  run->add_flag("-v,--verbose", verbose, "Per-step diagnostics on standard error");
  run->add_option("--jobs", run_jobs, "Worker threads for independent sweep points")->check(CLI::PositiveNumber);

  std::string suite_name;
  std::filesystem::path out_dir = "results";
  std::size_t jobs = 1;
  auto* bench = app.add_subcommand("bench", "Regenerate a benchmark table suite as CSV files");
  bench->add_option("suite", suite_name, "Suite name")->required()->check(CLI::IsMember(ps::suite_names()));
  bench->add_option("--out", out_dir, "Output directory");
  bench->add_option("--jobs", jobs, "Worker threads for independent sweep points")->check(CLI::PositiveNumber);

  auto* gamma = app.add_subcommand("gamma", "Print the contraction constant breakdown as CSV");
  gamma->add_option("config", config_path, "key = value configuration file")->required()->check(CLI::ExistingFile);

  double t_dump = 1.0;
  std::filesystem::path dump_out;
  auto* dump = app.add_subcommand("dump", "Simulate up to time t with the first scheme and write vertex fields");
  dump->add_option("config", config_path, "key = value configuration file")->required()->check(CLI::ExistingFile);
  dump->add_option("--t", t_dump, "Final time [s]")->check(CLI::NonNegativeNumber);
  dump->add_option("--out", dump_out, "Output file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      const ps::RunConfig cfg = ps::load_run_config(config_path);
      ps::write_csv(std::cout, ps::run_config(cfg, run_jobs, verbose ? &std::cerr : nullptr));
    } else if (*bench) {
      for (const auto& p : ps::run_suite(suite_name, out_dir, jobs)) std::cerr << "wrote " << p.string() << '\n';
    } else if (*gamma) {
      ps::write_gamma_csv(std::cout, ps::load_run_config(config_path));
    } else if (*dump) {
      const ps::RunConfig cfg = ps::load_run_config(config_path);
      auto problem = ps::build_benchmark(cfg.kind, cfg.overrides);
      ps::SplitConfig sc = cfg.schemes.front();
      sc.outer_tol = problem->setup().outer_tol;
      sc.outer_cap = problem->setup().outer_cap;
      sc.inner_rtol = cfg.inner_rtol;
      sc.ilu_level = cfg.ilu_level;
      const auto steps = static_cast<std::size_t>(std::llround(t_dump / problem->params().dt));
      const ps::RunResult res = ps::simulate(*problem, sc, steps);
      if (!res.converged) std::cerr << "warning: " << res.failure << '\n';
      ps::dump_fields(*problem, res.final_state, dump_out);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
