#include "gfwopt/spca.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gfwopt/engine.hpp"
#include "gfwopt/kernels.hpp"
#include "gfwopt/oracles.hpp"
#include "gfwopt/rng.hpp"

namespace gfwopt::spca {

void validate(const SpcaProblem& p) {
  if (p.a.rows != p.a.cols) throw NonSymmetricError("SpcaProblem: matrix not square");
  if (max_asymmetry(p.a) > 1e-12) throw NonSymmetricError("SpcaProblem: asymmetry > 1e-12");
  if (p.k < 1 || p.k > p.a.rows) throw std::invalid_argument("SpcaProblem: k out of range");
  if (p.sigma < 0.0) throw std::invalid_argument("SpcaProblem: sigma must be >= 0");
}

RunResult run_spca(const SpcaProblem& p, const Vec& x0, const GfwConfig& cfg) {
  validate(p);
  Mat shifted = p.a;
  for (std::size_t i = 0; i < shifted.rows; ++i) shifted(i, i) += p.sigma;
  const Objective obj = quadratic_objective(shifted);
  const SphereCardinalityOracle oracle(p.a.rows, p.k);
  return run_gfw(obj, oracle, x0, cfg);
}

double reported_objective(const SpcaProblem& p, const Vec& x) {
  return dot(x, matvec(p.a, x));
}

BruteResult brute_force_spca(const Mat& a, std::size_t k) {
  if (a.rows != a.cols || max_asymmetry(a) > 1e-12)
    throw NonSymmetricError("brute_force_spca: symmetric matrix required");
  const std::size_t n = a.rows;
  if (k < 1 || k > n) throw std::invalid_argument("brute_force_spca: k out of range");
  if (n > 12) throw TooLargeError("brute_force_spca: n > 12");
  double comb = 1.0;
  for (std::size_t i = 0; i < k; ++i) comb = comb * static_cast<double>(n - i) / (i + 1);
  if (comb > 1000.0) throw TooLargeError("brute_force_spca: C(n, k) > 1000");

  BruteResult best;
  best.value = -std::numeric_limits<double>::infinity();
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  for (;;) {
    Mat sub(k, k);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) sub(i, j) = a(idx[i], idx[j]);
    std::vector<double> evals;
    Mat evecs;
    jacobi_eigen(sub, evals, evecs);
    const double lam = evals.back();
    if (lam > best.value) {
      best.value = lam;
      best.support = idx;
      best.x.assign(n, 0.0);
      // Sign fixed by the largest-magnitude component.
      std::size_t imax = 0;
      for (std::size_t i = 1; i < k; ++i)
        if (std::fabs(evecs(i, k - 1)) > std::fabs(evecs(imax, k - 1))) imax = i;
      const double sgn = evecs(imax, k - 1) >= 0.0 ? 1.0 : -1.0;
      for (std::size_t i = 0; i < k; ++i) best.x[idx[i]] = sgn * evecs(i, k - 1);
    }
    // Next lexicographic k-subset of {0..n-1}.
    std::size_t i = k;
    bool advanced = false;
    while (i > 0) {
      --i;
      if (idx[i] != i + n - k) {
        ++idx[i];
        for (std::size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
        advanced = true;
        break;
      }
    }
    if (!advanced) break;
  }
  return best;
}

namespace {

std::vector<std::size_t> support_of(const Vec& x) {
  std::vector<std::size_t> s;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] != 0.0) s.push_back(i);
  return s;
}

}  // namespace

MultistartResult spca_multistart(const SpcaProblem& p, std::size_t restarts,
                                 const GfwConfig& cfg, std::uint64_t seed) {
  validate(p);
  if (restarts < 1) throw std::invalid_argument("spca_multistart: restarts must be >= 1");
  const std::size_t n = p.a.rows;
  MultistartResult out;
  Rng rng(seed);
  for (std::size_t rsi = 0; rsi < restarts; ++rsi) {
    Vec x0(n, 0.0);
    const std::vector<std::size_t> sup = rng.sample_indices(n, p.k);
    double nrm = 0.0;
    while (nrm < 1e-12) {
      for (std::size_t i : sup) x0[i] = rng.normal();
      double ss = 0.0;
      for (std::size_t i : sup) ss += x0[i] * x0[i];
      nrm = std::sqrt(ss);
    }
    for (std::size_t i : sup) x0[i] /= nrm;

    RunResult run = run_spca(p, x0, cfg);
    RestartRow row;
    row.restart = rsi;
    row.final_obj = reported_objective(p, run.final_iterate);
    row.iters = run.trace.rows.size();
    row.status = run.status;
    row.support = support_of(run.final_iterate);
    row.x = std::move(run.final_iterate);
    out.rows.push_back(std::move(row));
  }
  out.best_index = 0;
  for (std::size_t i = 1; i < out.rows.size(); ++i)
    if (out.rows[i].final_obj > out.rows[out.best_index].final_obj) out.best_index = i;
  return out;
}

double default_sigma(const Mat& a) {
  const double lmin = kernels::estimate_lambda_min(SymMatrix::dense_from(a));
  return std::max(0.0, -lmin) + 0.1;
}

std::string multistart_csv(const MultistartResult& res, const double* global_value) {
  std::string s = "restart,final_obj,iters,status,support";
  if (global_value) s += ",gap";
  s += '\n';
  for (const RestartRow& r : res.rows) {
    s += std::to_string(r.restart);
    s += ',';
    s += fmt_double(r.final_obj);
    s += ',';
    s += std::to_string(r.iters);
    s += ',';
    s += to_string(r.status);
    s += ',';
    for (std::size_t i = 0; i < r.support.size(); ++i) {
      if (i) s += ';';
      s += std::to_string(r.support[i]);
    }
    if (global_value) {
      s += ',';
      s += fmt_double(*global_value - r.final_obj);
    }
    s += '\n';
  }
  return s;
}

}  // namespace gfwopt::spca
