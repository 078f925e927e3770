// Command-line front end: seeded desk-scale experiment drivers with CSV,
// JSON, and SVG emission.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "gfwopt/engine.hpp"
#include "gfwopt/maxcut.hpp"
#include "gfwopt/rng.hpp"
#include "gfwopt/rwl1.hpp"
#include "gfwopt/spca.hpp"
#include "gfwopt/svg.hpp"

namespace fs = std::filesystem;
using namespace gfwopt;

namespace {

struct CommonArgs {
  std::string out = ".";
  std::uint64_t seed = 0;
  int jobs = 1;
  std::vector<std::string> formats = {"csv"};
  bool reproducible = false;

  bool wants(const std::string& f) const {
    return std::find(formats.begin(), formats.end(), f) != formats.end();
  }
};

void add_common(CLI::App* cmd, CommonArgs* c) {
  cmd->add_option("--out", c->out, "output directory")->capture_default_str();
  cmd->add_option("--seed", c->seed, "rng seed (mandatory: runs are seeded, never entropy-sourced)")
      ->required();
  cmd->add_option("--jobs", c->jobs, "worker threads for independent trials")
      ->envname("GFW_OPT_JOBS")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--formats", c->formats, "any of csv,json,svg")
      ->delimiter(',')
      ->check(CLI::IsMember({"csv", "json", "svg"}));
  cmd->add_flag("--reproducible", c->reproducible,
                "byte-stable outputs: zero time columns, disable wall-clock stopping, plot "
                "against iterations");
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << content;
}

// "a..b:step", "a,b,c" or a single value
std::vector<std::size_t> parse_grid(const std::string& text) {
  std::vector<std::size_t> out;
  const auto range_pos = text.find("..");
  if (range_pos != std::string::npos) {
    const auto step_pos = text.find(':', range_pos);
    if (step_pos == std::string::npos)
      throw CLI::ValidationError("--s", "range syntax is a..b:step");
    const std::size_t a = std::stoul(text.substr(0, range_pos));
    const std::size_t b = std::stoul(text.substr(range_pos + 2, step_pos - range_pos - 2));
    const std::size_t st = std::stoul(text.substr(step_pos + 1));
    if (st == 0 || b < a) throw CLI::ValidationError("--s", "bad range");
    for (std::size_t v = a; v <= b; v += st) out.push_back(v);
    return out;
  }
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(std::stoul(item));
  if (out.empty()) throw CLI::ValidationError("--s", "empty grid");
  return out;
}

// ----------------------------------------------------------------- rwl1

struct RwlArgs {
  CommonArgs common;
  std::size_t n = 256, m = 100, trials = 20;
  std::string s_text;
  double eps = 0.1, tol = 1e-3;
};

int cmd_rwl1(const RwlArgs& a) {
  rwl1::ExperimentParams p;
  p.n = a.n;
  p.m = a.m;
  p.s_grid = parse_grid(a.s_text);
  p.trials = a.trials;
  p.epsilon = a.eps;
  p.tol = a.tol;
  p.seed = a.common.seed;
  p.jobs = a.common.jobs;
  for (std::size_t s : p.s_grid)
    if (s > p.n) throw CLI::ValidationError("--s", "sparsity above n");
  if (p.m > p.n) throw CLI::ValidationError("--m", "m must be <= n");

  const rwl1::RecoveryStats st = rwl1::recovery_experiment(p);
  const fs::path dir(a.common.out);
  fs::create_directories(dir);
  write_file(dir / "rwl1_recovery.csv", rwl1::recovery_csv(st, a.common.reproducible));

  if (a.common.wants("json")) {
    nlohmann::json j = nlohmann::json::array();
    for (const rwl1::LevelStats& lv : st.levels)
      j.push_back({{"variant", lv.variant},
                   {"s", lv.s},
                   {"trials", lv.trials},
                   {"successes", lv.successes},
                   {"rate", lv.rate()},
                   {"mean_cg_iters", lv.mean_cg_iters},
                   {"mean_time_s", a.common.reproducible ? 0.0 : lv.mean_time_s}});
    write_file(dir / "rwl1_recovery.json", j.dump(2) + "\n");
  }
  if (a.common.wants("svg") && p.s_grid.size() >= 2) {
    std::vector<svg::Series> series;
    for (const char* variant : {"l1", "rwl1", "rwl1_split"}) {
      svg::Series s;
      s.name = variant;
      for (const rwl1::LevelStats& lv : st.levels)
        if (lv.variant == variant) s.points.emplace_back(double(lv.s), lv.rate());
      series.push_back(std::move(s));
    }
    write_file(dir / "rwl1_recovery.svg", svg::render_svg(series, "sparsity s", "recovery rate"));
  }
  return 0;
}

// ----------------------------------------------------------------- spca

struct SpcaArgs {
  CommonArgs common;
  std::size_t n = 8, k = 3, restarts = 100;
  std::string sigma = "auto";
  std::string input;
  bool oracle_check = false;
};

int cmd_spca(const SpcaArgs& a) {
  Mat matrix;
  if (!a.input.empty()) {
    std::string warning;
    const SymMatrix loaded = maxcut::load_matrix_market(a.input, &warning);
    if (!warning.empty()) std::cerr << "warning: " << warning << "\n";
    matrix = loaded.to_dense();
  } else {
    const SymMatrix g = maxcut::gen_gaussian_sym(a.n, derive_seed(a.common.seed, 0));
    matrix = g.to_dense();
  }
  const std::size_t n = matrix.rows;
  if (a.k < 1 || a.k > n) throw CLI::ValidationError("--k", "k out of range");

  spca::SpcaProblem p;
  p.a = matrix;
  p.k = a.k;
  p.sigma = (a.sigma == "auto") ? spca::default_sigma(matrix) : std::stod(a.sigma);
  if (p.sigma < 0.0) throw CLI::ValidationError("--sigma", "sigma must be >= 0");

  GfwConfig cfg;
  cfg.max_iter = 1000;
  cfg.seed = a.common.seed;
  const spca::MultistartResult ms =
      spca::spca_multistart(p, a.restarts, cfg, derive_seed(a.common.seed, 1));

  double global = 0.0;
  const double* global_ptr = nullptr;
  if (a.oracle_check) {
    if (n > 12) throw CLI::ValidationError("--oracle-check", "needs n <= 12");
    global = spca::brute_force_spca(matrix, a.k).value;
    global_ptr = &global;
  }
  const fs::path dir(a.common.out);
  fs::create_directories(dir);
  write_file(dir / "spca_runs.csv", spca::multistart_csv(ms, global_ptr));
  if (a.common.wants("json")) {
    nlohmann::json j;
    j["sigma"] = p.sigma;
    j["best_restart"] = ms.best_index;
    j["best_objective"] = ms.rows[ms.best_index].final_obj;
    if (global_ptr) j["global_value"] = global;
    write_file(dir / "spca_runs.json", j.dump(2) + "\n");
  }
  return 0;
}

// --------------------------------------------------------------- maxcut

struct MaxcutArgs {
  CommonArgs common;
  std::size_t n = 200;
  std::size_t r = 0;  // 0: ceil(sqrt(2n))
  std::string input;
  std::string sigma;  // "auto:gamma" | value; default 50/n
  std::vector<std::string> algos = {"gfw", "bcm"};
  double budget = 10.0, tol = 1e-6;
  std::size_t max_iter = 10000;
  std::string sweep;
};

double resolve_sigma(const std::string& text, const SymMatrix& a) {
  if (text.empty()) return 50.0 / static_cast<double>(a.n);
  if (text.rfind("auto", 0) == 0) {
    double gamma = 0.1;
    const auto colon = text.find(':');
    if (colon != std::string::npos) gamma = std::stod(text.substr(colon + 1));
    return maxcut::choose_sigma(a, gamma);
  }
  return std::stod(text);
}

// one trace row per line: algo,iter_or_sweep,objective,time_s (+sigma when sweeping)
void append_trace_rows(std::string* out, const std::string& algo, const GfwTrace& t,
                       bool zero_times, const double* sigma) {
  for (const TraceRow& row : t.rows) {
    *out += algo;
    *out += ',';
    if (sigma) {
      *out += fmt_double(*sigma);
      *out += ',';
    }
    *out += std::to_string(row.k);
    *out += ',';
    *out += fmt_double(row.objective);
    *out += ',';
    *out += fmt_double(zero_times ? 0.0 : row.time_s);
    *out += '\n';
  }
}

bool trace_monotone(const GfwTrace& t, double slack) {
  for (std::size_t k = 0; k + 1 < t.rows.size(); ++k)
    if (t.rows[k + 1].objective - t.rows[k].objective < -slack) return false;
  return true;
}

svg::Series trace_series(const std::string& name, const GfwTrace& t, bool by_iteration) {
  svg::Series s;
  s.name = name;
  for (const TraceRow& row : t.rows)
    s.points.emplace_back(by_iteration ? double(row.k) : row.time_s, row.objective);
  return s;
}

int cmd_maxcut(const MaxcutArgs& a) {
  SymMatrix mat;
  if (!a.input.empty()) {
    std::string warning;
    mat = maxcut::load_matrix_market(a.input, &warning);
    if (!warning.empty()) std::cerr << "warning: " << warning << "\n";
  } else {
    mat = maxcut::gen_gaussian_sym(a.n, derive_seed(a.common.seed, 0));
  }
  const std::size_t n = mat.n;
  const std::size_t r =
      a.r ? a.r : static_cast<std::size_t>(std::ceil(std::sqrt(2.0 * static_cast<double>(n))));
  const maxcut::BmFactor b0 = maxcut::random_b0(n, r, derive_seed(a.common.seed, 1));

  GfwConfig cfg;
  cfg.max_iter = a.max_iter;
  cfg.tol_step = a.tol;
  cfg.seed = a.common.seed;
  if (!a.common.reproducible) cfg.wall_time_limit = a.budget;

  const fs::path dir(a.common.out);
  fs::create_directories(dir);
  const bool zero_times = a.common.reproducible;

  if (!a.sweep.empty()) {
    std::vector<double> sigmas;
    std::stringstream ss(a.sweep);
    std::string item;
    while (std::getline(ss, item, ','))
      if (!item.empty()) sigmas.push_back(std::stod(item));
    if (sigmas.empty()) throw CLI::ValidationError("--sigma-sweep", "empty list");

    std::string csv = "algo,sigma,iter_or_sweep,objective,time_s\n";
    std::string summary = "sigma,status,iters,final_objective,monotone,converged\n";
    std::vector<svg::Series> series;
    for (double sg : sigmas) {
      maxcut::MaxcutProblem p{mat, r, sg};
      const maxcut::McRunResult run = maxcut::run_gfw_maxcut(p, b0, cfg);
      append_trace_rows(&csv, "gfw", run.trace, zero_times, &sg);
      const bool mono = trace_monotone(run.trace, 1e-8);
      const bool conv = run.status == TerminationStatus::StepConverged ||
                        run.status == TerminationStatus::GapConverged ||
                        run.status == TerminationStatus::IterateRepeated;
      summary += fmt_double(sg);
      summary += ',';
      summary += to_string(run.status);
      summary += ',';
      summary += std::to_string(run.trace.rows.size());
      summary += ',';
      summary += fmt_double(run.trace.rows.empty() ? 0.0 : run.trace.rows.back().objective);
      summary += ',';
      summary += mono ? '1' : '0';
      summary += ',';
      summary += conv ? '1' : '0';
      summary += '\n';
      if (run.trace.rows.size() >= 2)
        series.push_back(
            trace_series("sigma=" + fmt_double(sg), run.trace, a.common.reproducible));
    }
    write_file(dir / "maxcut_sweep.csv", csv);
    write_file(dir / "maxcut_sweep_summary.csv", summary);
    if (a.common.wants("svg") && !series.empty())
      write_file(dir / "maxcut_sweep.svg",
                 svg::render_svg(series, a.common.reproducible ? "iteration" : "time (s)",
                                 "objective"));
    return 0;
  }

  const double sigma = resolve_sigma(a.sigma, mat);
  maxcut::MaxcutProblem p{mat, r, sigma};
  std::string csv = "algo,iter_or_sweep,objective,time_s\n";
  nlohmann::json jruns = nlohmann::json::array();
  std::vector<svg::Series> series;
  for (const std::string& algo : a.algos) {
    maxcut::McRunResult run;
    if (algo == "gfw") {
      run = maxcut::run_gfw_maxcut(p, b0, cfg);
    } else if (algo == "bcm") {
      run = maxcut::run_bcm(p, b0, cfg);
    } else {
      throw CLI::ValidationError("--algos", "unknown algorithm " + algo);
    }
    append_trace_rows(&csv, algo, run.trace, zero_times, nullptr);
    if (run.trace.rows.size() >= 2)
      series.push_back(trace_series(algo, run.trace, a.common.reproducible));
    if (a.common.wants("json")) {
      nlohmann::json j = nlohmann::json::parse(trace_to_json(run.trace, zero_times));
      j["algo"] = algo;
      j["sigma"] = sigma;
      jruns.push_back(j);
    }
  }
  write_file(dir / "maxcut_trace.csv", csv);
  if (a.common.wants("json"))
    write_file(dir / "maxcut_trace.json", nlohmann::json{{"runs", jruns}}.dump(2) + "\n");
  if (a.common.wants("svg") && !series.empty())
    write_file(dir / "maxcut_trace.svg",
               svg::render_svg(series, a.common.reproducible ? "iteration" : "time (s)",
                               "objective"));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Greedy Frank-Wolfe toolkit: reweighted l1 recovery, sparse PCA, Max-Cut SDP"};
  app.require_subcommand(1);

  RwlArgs rwl;
  CLI::App* rw = app.add_subcommand("rwl1", "sparse recovery experiment");
  add_common(rw, &rwl.common);
  rw->add_option("--n", rwl.n, "signal dimension")->capture_default_str();
  rw->add_option("--m", rwl.m, "measurement count")->capture_default_str();
  rw->add_option("--s", rwl.s_text, "sparsity grid: list 4,8 or range 20..60:10")->required();
  rw->add_option("--trials", rwl.trials, "trials per level")->capture_default_str();
  rw->add_option("--eps", rwl.eps, "reweighting epsilon")->capture_default_str();
  rw->add_option("--tol", rwl.tol, "step-norm stopping tolerance")->capture_default_str();

  SpcaArgs spc;
  CLI::App* sp = app.add_subcommand("spca", "sparse PCA multistart");
  add_common(sp, &spc.common);
  sp->add_option("--n", spc.n, "matrix size for generated instances")->capture_default_str();
  sp->add_option("--k", spc.k, "cardinality budget")->capture_default_str();
  sp->add_option("--restarts", spc.restarts, "multistart count")->capture_default_str();
  sp->add_option("--sigma", spc.sigma, "shift: auto or a value")->capture_default_str();
  sp->add_option("--input", spc.input, "matrix market file instead of a generated matrix");
  sp->add_flag("--oracle-check", spc.oracle_check, "compare against brute force (n <= 12)");

  MaxcutArgs mc;
  CLI::App* mx = app.add_subcommand("maxcut", "low-rank Max-Cut SDP");
  add_common(mx, &mc.common);
  mx->add_option("--n", mc.n, "instance size for generated matrices")->capture_default_str();
  mx->add_option("--r", mc.r, "factor rank (default ceil(sqrt(2n)))");
  mx->add_option("--input", mc.input, "matrix market graph");
  mx->add_option("--sigma", mc.sigma, "shift: value or auto:gamma (default 50/n)");
  mx->add_option("--algos", mc.algos, "subset of gfw,bcm")
      ->delimiter(',')
      ->check(CLI::IsMember({"gfw", "bcm"}));
  mx->add_option("--budget", mc.budget, "wall-time budget seconds")->capture_default_str();
  mx->add_option("--tol", mc.tol, "step-norm tolerance")->capture_default_str();
  mx->add_option("--max-iter", mc.max_iter, "iteration cap")->capture_default_str();
  mx->add_option("--sigma-sweep", mc.sweep, "comma list of shifts; runs gfw once per value");

  int code = 0;
  rw->callback([&] { code = cmd_rwl1(rwl); });
  sp->callback([&] { code = cmd_spca(spc); });
  mx->callback([&] { code = cmd_maxcut(mc); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return code;
}
