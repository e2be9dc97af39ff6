#include "porosplit/bench.hpp"

#include <atomic>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "porosplit/analysis.hpp"

namespace porosplit {

namespace {

std::string fmt(const char* spec, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, x);
  return buf;
}

struct Point3 {
  std::string value;
  SplitConfig scheme;
};

BenchResult run_point(const RunConfig& cfg, const std::string& value, const SplitConfig& scheme,
                      std::string* details) {
  ParameterMap m = cfg.overrides;
  if (!cfg.sweep_key.empty()) m[cfg.sweep_key] = value;
  auto problem = build_benchmark(cfg.kind, m);
  SplitConfig sc = scheme;
  sc.outer_tol = problem->setup().outer_tol;
  sc.outer_cap = problem->setup().outer_cap;
  sc.inner_rtol = cfg.inner_rtol;
  sc.ilu_level = cfg.ilu_level;

  BenchResult r;
  r.case_name = std::string(to_string(cfg.kind));
  r.elements = problem->setup().elements.label();
  r.scheme = sc.label();
  r.param = cfg.sweep_key.empty() ? "none" : cfg.sweep_key;
  r.value = cfg.sweep_key.empty() ? "-" : value;
  r.dofs = problem->n_total();
  r.timed = cfg.timing;
  const RunResult run = simulate(*problem, sc, problem->setup().steps);
  r.converged = run.converged;
  r.avg_iters = run.average_iterations;
  r.steps_run = run.reports.size();
  r.failure = run.failure;
  if (!run.reports.empty()) r.wall_time_s = run.wall_time_s / static_cast<double>(run.reports.size());
  if (details) {
    std::ostringstream os;
    for (std::size_t n = 0; n < run.reports.size(); ++n) {
      const IterationReport& rep = run.reports[n];
      os << r.scheme << ' ' << r.param << '=' << r.value << " step " << n + 1 << ": iters " << rep.iterations
         << " inner " << rep.inner_iterations << " inner_failures " << rep.inner_failures << " final_rel "
         << (rep.residual_history.empty() ? 0.0 : rep.residual_history.back());
      if (!rep.failure.empty()) os << " (" << rep.failure << ')';
      os << '\n';
    }
    *details = os.str();
  }
  return r;
}

// RFC 4180 quoting for fields containing separators, e.g. "l2s(-0.5,0,1)".
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

SplitConfig scheme(const char* s) { return SplitConfig::parse(s); }

RunConfig make(const std::string& name, CaseKind kind, std::vector<SplitConfig> schemes,
               ParameterMap overrides, std::string sweep_key, std::vector<std::string> values) {
  RunConfig c;
  c.name = name;
  c.kind = kind;
  c.schemes = std::move(schemes);
  c.overrides = std::move(overrides);
  c.sweep_key = std::move(sweep_key);
  c.sweep_values = std::move(values);
  return c;
}

std::vector<SplitConfig> l2s_variants(const char* suffix = "") {
  std::vector<SplitConfig> out;
  for (const char* b : {"l2s(0,0,0)", "l2s(0,0,1)", "l2s(-0.5,0,1)", "l2s(-1,0,1)"})
    out.push_back(scheme((std::string(b) + suffix).c_str()));
  return out;
}

std::vector<SplitConfig> comparison_schemes() {
  std::vector<SplitConfig> out;
  for (const char* s : {"altmin", "altmin+aa1", "altmin+aa5", "l2s(-0.5,0,1)", "l2s(-0.5,0,1)+aa1",
                        "l2s(-0.5,0,1)+aa5"})
    out.push_back(scheme(s));
  return out;
}

const std::vector<std::string> kElementPair{"P1/P1/P1", "P1/P2/P1"};
const std::vector<std::string> kCmpElements{"P1/P2/P1", "P2/P2/P1"};

std::string stem(const std::string& base, const std::string& elements) {
  std::string s = base + "_";
  for (char c : elements)
    if (c != '/') s += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

}  // namespace

std::string csv_header() { return "case,elements,scheme,param,value,avg_iters,converged,wall_time_s"; }

std::string csv_row(const BenchResult& r) {
  std::ostringstream os;
  os << csv_field(r.case_name) << ',' << csv_field(r.elements) << ',' << csv_field(r.scheme) << ','
     << csv_field(r.param) << ',' << csv_field(r.value) << ','
     << (r.converged ? fmt("%.2f", r.avg_iters) : std::string("--")) << ','
     << (r.converged ? "true" : "false") << ',' << (r.timed ? fmt("%.4f", r.wall_time_s) : std::string("NA"));
  return os.str();
}

void write_csv(std::ostream& out, const std::vector<BenchResult>& rows) {
  out << csv_header() << '\n';
  for (const auto& r : rows) out << csv_row(r) << '\n';
}

std::vector<BenchResult> run_config(const RunConfig& cfg, std::size_t jobs, std::ostream* log) {
  {
    ModelParameters p = default_parameters(cfg.kind);
    BenchmarkCase c = default_case(cfg.kind);
    apply_overrides(p, c, cfg.overrides);
    if (c.steps == 0 && (cfg.sweep_key != "steps")) return {};
  }
  std::vector<Point3> points;
  const std::vector<std::string> values =
      cfg.sweep_key.empty() ? std::vector<std::string>{""} : cfg.sweep_values;
  for (const auto& v : values)
    for (const auto& s : cfg.schemes) points.push_back({v, s});

  std::vector<BenchResult> rows(points.size());
  std::vector<std::string> errors(points.size());
  std::vector<std::string> details(points.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < points.size();) {
      try {
        rows[i] = run_point(cfg, points[i].value, points[i].scheme, log ? &details[i] : nullptr);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  const std::size_t n = std::max<std::size_t>(1, std::min(jobs, points.size()));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < n; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors)
    if (!e.empty()) throw std::runtime_error(e);
  if (log)
    for (const auto& d : details) *log << d;
  return rows;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{
      "table1",        "table_bulk",         "table_perm",        "table_perm_aa",
      "table_density", "table_kdr",          "table_swelling_cmp", "table_footing_cmp",
      "table_perfusion_cmp", "table_walltime"};
  return names;
}

std::vector<SuiteTable> suite(std::string_view name) {
  const auto S = CaseKind::swelling;
  std::vector<SuiteTable> out;
  auto add = [&](const std::string& n, RunConfig c) { out.push_back({n, {std::move(c)}}); };

  if (name == "table1") {
    add("table1a", make("table1a", S, {scheme("altmin")}, {}, "kappa_s", {"1e2", "1e3", "1e4", "1e5"}));
    add("table1b", make("table1b", S, {scheme("altmin")}, {{"outer_cap", "500"}}, "kappa_f",
                        {"1e-9", "1e-10", "1e-11", "1e-12"}));
    add("table1c", make("table1c", S, {scheme("altmin")}, {}, "porosity_ell", {"2", "4", "6", "8"}));
  } else if (name == "table_bulk") {
    for (const auto& el : kElementPair)
      add(stem("table_bulk", el), make("table_bulk", S, l2s_variants(), {{"elements", el}}, "kappa_s",
                                       {"1e2", "1e4", "1e6", "1e8"}));
  } else if (name == "table_perm" || name == "table_perm_aa") {
    const bool aa = name == "table_perm_aa";
    for (const auto& el : kElementPair)
      add(stem(std::string(name), el),
          make(std::string(name), S, l2s_variants(aa ? "+aa5" : ""), {{"elements", el}, {"outer_cap", "500"}},
               "kappa_f", {"1e-7", "1e-8", "1e-9", "1e-10", "1e-11", "1e-12"}));
  } else if (name == "table_density") {
    add("table_density", make("table_density", S, l2s_variants(), {{"elements", "P1/P1/P1"}}, "rho",
                              {"1e2", "1e4", "1e6", "1e8"}));
  } else if (name == "table_kdr") {
    for (const auto& el : kElementPair)
      add(stem("table_kdr", el), make("table_kdr", S, l2s_variants(), {{"elements", el}}, "K_dr",
                                      {"47.77", "477.7", "4777", "47770"}));
  } else if (name == "table_swelling_cmp") {
    for (const auto& el : kCmpElements)
      add(stem("table_swelling_cmp", el),
          make("table_swelling_cmp", S, comparison_schemes(), {{"elements", el}, {"steps", "5"}}, "kappa_s",
               {"1e4", "1e8"}));
  } else if (name == "table_footing_cmp") {
    add("table_footing_cmp", make("table_footing_cmp", CaseKind::footing, comparison_schemes(), {}, "elements",
                                  kCmpElements));
  } else if (name == "table_perfusion_cmp") {
    add("table_perfusion_cmp", make("table_perfusion_cmp", CaseKind::perfusion, comparison_schemes(), {},
                                    "elements", kCmpElements));
  } else if (name == "table_walltime") {
    RunConfig split = make("table_walltime", S, {scheme("l2s(-0.5,0,1)")}, {{"steps", "5"}}, "n_per_side",
                           {"50", "100"});
    split.inner_rtol = 1e-6;
    split.timing = true;
    RunConfig mono = make("table_walltime", S, {scheme("monolithic")}, {{"steps", "5"}}, "n_per_side",
                          {"50", "100"});
    mono.timing = true;
    out.push_back({"table_walltime", {split, mono}});
  } else {
    throw std::invalid_argument("unknown suite '" + std::string(name) + "'");
  }
  return out;
}

std::vector<std::filesystem::path> run_suite(std::string_view name, const std::filesystem::path& out_dir,
                                             std::size_t jobs, std::ostream* log) {
  const std::vector<SuiteTable> tables = suite(name);
  std::filesystem::create_directories(out_dir);
  std::vector<std::filesystem::path> written;
  for (const auto& table : tables) {
    std::vector<BenchResult> rows;
    for (const auto& run : table.runs) {
      // Timed runs stay sequential so the timings are not contended.
      auto part = run_config(run, run.timing ? 1 : jobs);
      rows.insert(rows.end(), part.begin(), part.end());
    }
    const auto path = out_dir / (table.name + ".csv");
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write '" + path.string() + "'");
    write_csv(f, rows);
    written.push_back(path);
    if (log) {
      *log << "# " << path.string() << '\n';
      write_csv(*log, rows);
    }
    if (name == "table_walltime") {
      std::map<std::string, std::pair<const BenchResult*, const BenchResult*>> by_n;
      for (const auto& r : rows) (r.scheme == "monolithic" ? by_n[r.value].second : by_n[r.value].first) = &r;
      const auto rpath = out_dir / "table_walltime_ratio.csv";
      std::ofstream rf(rpath);
      rf << "n_per_side,dofs,l2s_s,monolithic_s,ratio\n";
      for (const auto& [n, pair] : by_n) {
        if (!pair.first || !pair.second) continue;
        const double ratio = pair.first->wall_time_s / pair.second->wall_time_s;
        rf << n << ',' << pair.first->dofs << ',' << fmt("%.4f", pair.first->wall_time_s) << ','
           << fmt("%.4f", pair.second->wall_time_s) << ',' << fmt("%.4f", ratio) << '\n';
      }
      written.push_back(rpath);
    }
  }
  return written;
}

std::string gamma_csv_header() {
  return "case,elements,param,value,gamma,contraction,zeta,eta,theta,gamma1,gamma2,c_korn1,c_korn2,"
         "inv_bulk_phi0,n_max";
}

void write_gamma_csv(std::ostream& out, const RunConfig& cfg) {
  out << gamma_csv_header() << '\n';
  const std::vector<std::string> values =
      cfg.sweep_key.empty() ? std::vector<std::string>{""} : cfg.sweep_values;
  for (const auto& v : values) {
    ParameterMap m = cfg.overrides;
    if (!cfg.sweep_key.empty()) m[cfg.sweep_key] = v;
    auto problem = build_benchmark(cfg.kind, m);
    const GammaBreakdown g = gamma(*problem);
    out << to_string(cfg.kind) << ',' << problem->setup().elements.label() << ','
        << (cfg.sweep_key.empty() ? "none" : cfg.sweep_key) << ',' << (cfg.sweep_key.empty() ? "-" : v);
    for (double x : {g.gamma, g.contraction(), g.zeta, g.eta, g.theta, g.gamma1, g.gamma2, g.c_korn1,
                     g.c_korn2, g.inv_bulk_phi0, g.n_max})
      out << ',' << fmt("%.10g", x);
    out << '\n';
  }
}

void dump_fields(const Problem& pb, const State& s, std::ostream& out) {
  const Mesh& mesh = pb.mesh();
  out << "# x[m] y[m] ux[m] uy[m] vx[m/s] vy[m/s] p[Pa]  t=" << fmt("%.6g", s.t_now) << " s\n";
  for (std::size_t i = 0; i < mesh.num_vertices(); ++i) {
    const Point& x = mesh.vertices()[i];
    const double vals[] = {x.x,
                           x.y,
                           s.u_prev[pb.U().dof(i, 0)],
                           s.u_prev[pb.U().dof(i, 1)],
                           s.v_prev[pb.V().dof(i, 0)],
                           s.v_prev[pb.V().dof(i, 1)],
                           s.p_prev[pb.P().dof(i, 0)]};
    for (std::size_t k = 0; k < 7; ++k) out << (k ? " " : "") << fmt("%.12e", vals[k]);
    out << '\n';
  }
}

void dump_fields(const Problem& pb, const State& s, const std::filesystem::path& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write '" + path.string() + "'");
  dump_fields(pb, s, f);
  if (!f) throw std::runtime_error("write failed for '" + path.string() + "'");
}

}  // namespace porosplit
