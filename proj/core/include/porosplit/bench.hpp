#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "porosplit/config.hpp"

namespace porosplit {

/// One CSV row: a (case, scheme, sweep value) point.
struct BenchResult {
  std::string case_name;
  std::string elements;
  std::string scheme;
  std::string param;
  std::string value;
  bool converged = false;
  double avg_iters = 0.0;
  bool timed = false;
  double wall_time_s = 0.0;  // mean per time step
  std::size_t steps_run = 0;
  std::size_t dofs = 0;
  std::string failure;
};

std::string csv_header();
/// `--` in avg_iters for divergence, `NA` in wall_time_s unless timed.
std::string csv_row(const BenchResult& r);
void write_csv(std::ostream& out, const std::vector<BenchResult>& rows);

/// Runs every (sweep value, scheme) point; rows come back in sweep order,
/// then scheme order, independent of `jobs`.
/// With `log`, per-step diagnostics (iterations, inner Krylov work, failure)
/// are written there.
std::vector<BenchResult> run_config(const RunConfig& config, std::size_t jobs = 1,
                                    std::ostream* log = nullptr);

struct SuiteTable {
  std::string name;  // output file stem
  std::vector<RunConfig> runs;
};

const std::vector<std::string>& suite_names();
std::vector<SuiteTable> suite(std::string_view name);

/// Runs a suite and writes `<out_dir>/<table>.csv` per table; returns the
/// written paths.
std::vector<std::filesystem::path> run_suite(std::string_view name,
                                             const std::filesystem::path& out_dir,
                                             std::size_t jobs = 1, std::ostream* log = nullptr);

std::string gamma_csv_header();
/// One gamma row per sweep value of the configuration.
void write_gamma_csv(std::ostream& out, const RunConfig& config);

/// Vertex table: x y ux uy vx vy p, one line per mesh vertex.
void dump_fields(const Problem& problem, const State& state, std::ostream& out);
void dump_fields(const Problem& problem, const State& state, const std::filesystem::path& path);

}  // namespace porosplit
