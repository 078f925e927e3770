#include "gfwopt/rwl1.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>

#include "json.hpp"

#include "gfwopt/engine.hpp"
#include "gfwopt/oracles.hpp"
#include "gfwopt/rng.hpp"

namespace gfwopt::rwl1 {

SparseInstance gen_sparse_instance(std::size_t n, std::size_t m, std::size_t s,
                                   std::uint64_t seed) {
  if (s > n || m > n) throw std::invalid_argument("gen_sparse_instance: need s <= n, m <= n");
  SparseInstance inst;
  inst.n = n;
  inst.m = m;
  inst.s = s;
  inst.seed = seed;
  Rng rng(seed);
  inst.a = Mat(m, n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) inst.a(i, j) = rng.normal();
  for (std::size_t j = 0; j < n; ++j) {
    double ss = 0.0;
    for (std::size_t i = 0; i < m; ++i) ss += inst.a(i, j) * inst.a(i, j);
    const double nrm = std::sqrt(ss);
    for (std::size_t i = 0; i < m; ++i) inst.a(i, j) /= nrm;
  }
  inst.x_true.assign(n, 0.0);
  for (std::size_t idx : rng.sample_indices(n, s)) inst.x_true[idx] = rng.normal();
  inst.b = matvec(inst.a, inst.x_true);
  return inst;
}

Vec rw_weights(const RwVariant& v, const Vec& xp, const Vec& xm) {
  if (xp.size() != xm.size()) throw ShapeMismatchError("rw_weights: size mismatch");
  const std::size_t n = xp.size();
  Vec w(2 * n);
  if (v.kind == RwKind::Coupled) {
    for (std::size_t i = 0; i < n; ++i) {
      const double wi = 1.0 / (xp[i] + xm[i] + v.epsilon);
      w[i] = wi;
      w[n + i] = wi;
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      w[i] = 1.0 / (xp[i] + v.epsilon);
      w[n + i] = 1.0 / (xm[i] + v.epsilon);
    }
  }
  return w;
}

lp::LpStandardForm make_recovery_lp(const SparseInstance& inst) {
  lp::LpStandardForm p;
  p.m = inst.m;
  p.n = 2 * inst.n;
  p.a = Mat(inst.m, 2 * inst.n);
  for (std::size_t i = 0; i < inst.m; ++i)
    for (std::size_t j = 0; j < inst.n; ++j) {
      p.a(i, j) = inst.a(i, j);
      p.a(i, inst.n + j) = -inst.a(i, j);
    }
  p.b = inst.b;
  p.c.assign(2 * inst.n, 1.0);  // unweighted l1 by default
  return p;
}

Objective make_log_objective(const RwVariant& v, std::size_t n) {
  Objective obj;
  obj.dim = 2 * n;
  obj.alpha = 0.0;  // the run-dependent modulus is checked post hoc
  obj.lipschitz = (v.kind == RwKind::Split ? 1.0 : 2.0) / (v.epsilon * v.epsilon);
  const double eps = v.epsilon;
  const RwKind kind = v.kind;
  obj.eval = [n, eps, kind](const Vec& x) {
    double f = 0.0;
    if (kind == RwKind::Split) {
      for (std::size_t i = 0; i < 2 * n; ++i) f += std::log(eps + x[i]);
    } else {
      for (std::size_t i = 0; i < n; ++i) f += std::log(eps + x[i] + x[n + i]);
    }
    return -f;
  };
  obj.grad = [n, eps, kind](const Vec& x) {
    RwVariant vv{kind, eps};
    Vec xp(x.begin(), x.begin() + n), xm(x.begin() + n, x.end());
    Vec w = rw_weights(vv, xp, xm);
    for (double& wi : w) wi = -wi;
    return w;
  };
  return obj;
}

RwlResult run_rwl1(const SparseInstance& inst, const RwVariant& variant, const GfwConfig& cfg) {
  const std::size_t n = inst.n;
  LpBackedOracle oracle(make_recovery_lp(inst));
  // Unweighted l1 initializer: argmax of -1^T x over the polytope.
  const Vec x0 = oracle.solve(Vec(2 * n, -1.0));
  const Objective obj = make_log_objective(variant, n);

  RecordingOracle rec(oracle);
  RunResult run = run_gfw(obj, rec, x0, cfg);

  RwlResult out;
  out.trace = std::move(run.trace);
  out.split_point = std::move(run.final_iterate);
  out.initial_point = x0;
  out.cg_iters = out.trace.rows.size();
  double mx = nrm_inf(x0);
  for (const Vec& it : rec.outputs()) mx = std::max(mx, nrm_inf(it));
  out.max_coordinate = mx;
  out.x_hat.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.x_hat[i] = out.split_point[i] - out.split_point[n + i];
  return out;
}

namespace {

constexpr double kRecoverRelTol = 1e-3;

double rel_error(const Vec& x_hat, const Vec& x_true) {
  const double denom = nrm2(x_true);
  if (denom == 0.0) return nrm2(x_hat);
  return nrm2(sub(x_hat, x_true)) / denom;
}

TrialRow make_row(const std::string& variant, std::size_t s, std::size_t trial,
                  std::uint64_t seed, const Vec& x_hat, const Vec& x_true,
                  std::size_t cg_iters, double time_s) {
  TrialRow r;
  r.variant = variant;
  r.s = s;
  r.trial = trial;
  r.seed = seed;
  r.rel_err = rel_error(x_hat, x_true);
  r.recovered = r.rel_err <= kRecoverRelTol;
  r.cg_iters = cg_iters;
  r.time_s = time_s;
  return r;
}

}  // namespace

RecoveryStats recovery_experiment(const ExperimentParams& p) {
  using Clock = std::chrono::steady_clock;
  RecoveryStats st;
  struct Task {
    std::size_t s, trial;
  };
  std::vector<Task> tasks;
  for (std::size_t s : p.s_grid)
    for (std::size_t t = 0; t < p.trials; ++t) tasks.push_back({s, t});

  std::vector<std::array<TrialRow, 3>> results(tasks.size());
  const std::ptrdiff_t ntasks = static_cast<std::ptrdiff_t>(tasks.size());
#pragma omp parallel for schedule(dynamic) num_threads(std::max(1, p.jobs))
  for (std::ptrdiff_t ti = 0; ti < ntasks; ++ti) {
    const Task& task = tasks[ti];
    const std::uint64_t seed = derive_seed(p.seed, task.s, task.trial);
    const SparseInstance inst = gen_sparse_instance(p.n, p.m, task.s, seed);

    GfwConfig cfg;
    cfg.max_iter = 500;
    cfg.tol_step = p.tol;
    cfg.seed = seed;

    // Plain l1 baseline: the initializer alone.
    auto t0 = Clock::now();
    LpBackedOracle oracle(make_recovery_lp(inst));
    const Vec z = oracle.solve(Vec(2 * p.n, -1.0));
    Vec x_l1(p.n);
    for (std::size_t i = 0; i < p.n; ++i) x_l1[i] = z[i] - z[p.n + i];
    const double l1_time = std::chrono::duration<double>(Clock::now() - t0).count();
    results[ti][0] = make_row("l1", task.s, task.trial, seed, x_l1, inst.x_true, 1, l1_time);

    t0 = Clock::now();
    RwlResult rw = run_rwl1(inst, {RwKind::Coupled, p.epsilon}, cfg);
    double dt = std::chrono::duration<double>(Clock::now() - t0).count();
    results[ti][1] =
        make_row("rwl1", task.s, task.trial, seed, rw.x_hat, inst.x_true, rw.cg_iters, dt);

    t0 = Clock::now();
    RwlResult rs = run_rwl1(inst, {RwKind::Split, p.epsilon}, cfg);
    dt = std::chrono::duration<double>(Clock::now() - t0).count();
    results[ti][2] =
        make_row("rwl1_split", task.s, task.trial, seed, rs.x_hat, inst.x_true, rs.cg_iters, dt);
  }

  for (const auto& triple : results)
    for (const TrialRow& r : triple) st.rows.push_back(r);
  std::sort(st.rows.begin(), st.rows.end(), [](const TrialRow& a, const TrialRow& b) {
    if (a.variant != b.variant) return a.variant < b.variant;
    if (a.s != b.s) return a.s < b.s;
    return a.trial < b.trial;
  });

  for (const TrialRow& r : st.rows) {
    LevelStats* lv = nullptr;
    for (LevelStats& cand : st.levels)
      if (cand.variant == r.variant && cand.s == r.s) lv = &cand;
    if (!lv) {
      st.levels.push_back({r.variant, r.s, 0, 0, 0.0, 0.0});
      lv = &st.levels.back();
    }
    lv->trials++;
    lv->successes += r.recovered ? 1 : 0;
    lv->mean_cg_iters += r.cg_iters;
    lv->mean_time_s += r.time_s;
  }
  for (LevelStats& lv : st.levels) {
    lv.mean_cg_iters /= lv.trials;
    lv.mean_time_s /= lv.trials;
  }
  return st;
}

std::string recovery_csv(const RecoveryStats& st, bool zero_times) {
  std::string s = "variant,s,trial,seed,recovered,cg_iters,time_s,rel_err\n";
  for (const TrialRow& r : st.rows) {
    s += r.variant;
    s += ',';
    s += std::to_string(r.s);
    s += ',';
    s += std::to_string(r.trial);
    s += ',';
    s += std::to_string(r.seed);
    s += ',';
    s += r.recovered ? '1' : '0';
    s += ',';
    s += std::to_string(r.cg_iters);
    s += ',';
    s += fmt_double(zero_times ? 0.0 : r.time_s);
    s += ',';
    s += fmt_double(r.rel_err);
    s += '\n';
  }
  return s;
}

std::string instance_to_json(const SparseInstance& inst) {
  nlohmann::json j = nlohmann::json::parse(lp::lp_to_json(make_recovery_lp(inst)));
  j["x_true"] = inst.x_true;
  j["s"] = inst.s;
  j["seed"] = inst.seed;
  return j.dump(2) + "\n";
}

SparseInstance instance_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  lp::LpStandardForm p = lp::lp_from_json(text);
  if (p.n % 2 != 0) throw std::invalid_argument("instance_from_json: odd variable count");
  SparseInstance inst;
  inst.n = p.n / 2;
  inst.m = p.m;
  inst.a = Mat(p.m, inst.n);
  for (std::size_t i = 0; i < p.m; ++i)
    for (std::size_t jx = 0; jx < inst.n; ++jx) inst.a(i, jx) = p.a(i, jx);
  inst.b = p.b;
  inst.x_true = j.at("x_true").get<Vec>();
  inst.s = j.at("s").get<std::size_t>();
  inst.seed = j.at("seed").get<std::uint64_t>();
  return inst;
}

}  // namespace gfwopt::rwl1
