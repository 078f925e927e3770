#include "gfwopt/maxcut.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstring>
#include <fstream>
#include <optional>
#include <sstream>

#include "gfwopt/rng.hpp"

namespace gfwopt::maxcut {

namespace {
constexpr double kZeroRowTol = 1e-14;
using Clock = std::chrono::steady_clock;

double elapsed_s(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

bool mats_equal(const Mat& a, const Mat& b) {
  return a.rows == b.rows && a.cols == b.cols &&
         std::memcmp(a.data.data(), b.data.data(), a.data.size() * sizeof(double)) == 0;
}
}  // namespace

bool factor_feasible(const BmFactor& f, double tol) {
  for (std::size_t i = 0; i < f.n(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < f.r(); ++j) s += f.b(i, j) * f.b(i, j);
    if (std::fabs(std::sqrt(s) - 1.0) > tol) return false;
  }
  return true;
}

double maxcut_objective(const MaxcutProblem& p, const BmFactor& f) {
  if (f.n() != p.a.n || f.r() != p.r)
    throw ShapeMismatchError("maxcut_objective: factor shape mismatch");
  Mat prod;
  kernels::matmul(p.a, f.b, prod);
  return kernels::frob_dot(prod, f.b);
}

BmFactor gfw_maxcut_step(const MaxcutProblem& p, const BmFactor& bk) {
  if (bk.n() != p.a.n || bk.r() != p.r)
    throw ShapeMismatchError("gfw_maxcut_step: factor shape mismatch");
  const SymMatrix shifted = p.a.shifted(p.sigma);
  Mat g, next;
  kernels::matmul(shifted, bk.b, g);
  kernels::row_normalize(g, bk.b, next, kZeroRowTol);
  return BmFactor{std::move(next)};
}

McRunResult run_gfw_maxcut(const MaxcutProblem& p, const BmFactor& b0, const GfwConfig& cfg,
                           const McOptions& opts) {
  if (cfg.max_iter < 1) throw std::invalid_argument("GfwConfig: max_iter must be >= 1");
  if (!factor_feasible(b0)) throw InfeasibleStartError("run_gfw_maxcut: rows must be unit norm");
  const std::size_t n = p.a.n;
  const SymMatrix shifted = p.a.shifted(p.sigma);
  const double shift_const = p.sigma * static_cast<double>(n);

  McRunResult res;
  Mat b = b0.b, g, next;
  const auto start = Clock::now();
  std::optional<TerminationStatus> status;
  if (opts.record_iterates) res.iterates.push_back(b);

  for (std::size_t k = 0; k < cfg.max_iter; ++k) {
    kernels::matmul(shifted, b, g);
    const double obj_shifted = kernels::frob_dot(g, b);
    kernels::row_normalize(g, b, next, kZeroRowTol);
    const double gap = kernels::frob_dot(g, next) - obj_shifted;
    const double step = kernels::frob_diff_norm(next, b);
    res.trace.rows.push_back({k, obj_shifted - shift_const, gap, step, elapsed_s(start)});

    if (mats_equal(next, b)) {
      status = TerminationStatus::IterateRepeated;
      break;
    }
    std::swap(b, next);
    if (opts.record_iterates) res.iterates.push_back(b);
    if (cfg.tol_gap > 0.0 && gap <= cfg.tol_gap) {
      status = TerminationStatus::GapConverged;
      break;
    }
    if (cfg.tol_step > 0.0 && step <= cfg.tol_step) {
      status = TerminationStatus::StepConverged;
      break;
    }
    if (cfg.wall_time_limit && elapsed_s(start) > *cfg.wall_time_limit) {
      status = TerminationStatus::TimeLimit;
      break;
    }
  }
  res.status = status.value_or(TerminationStatus::MaxIter);
  res.trace.status = res.status;
  res.final_factor = BmFactor{std::move(b)};
  return res;
}

McRunResult run_bcm(const MaxcutProblem& p, const BmFactor& b0, const GfwConfig& cfg,
                    const McOptions& opts) {
  if (cfg.max_iter < 1) throw std::invalid_argument("GfwConfig: max_iter must be >= 1");
  if (!factor_feasible(b0)) throw InfeasibleStartError("run_bcm: rows must be unit norm");
  const std::size_t n = p.a.n;
  const std::size_t r = p.r;
  if (b0.n() != n || b0.r() != r) throw ShapeMismatchError("run_bcm: factor shape mismatch");

  McRunResult res;
  Mat b = b0.b;
  Mat prev(n, r), prod;
  Vec gi(r);
  const auto start = Clock::now();
  std::optional<TerminationStatus> status;
  if (opts.record_iterates) res.iterates.push_back(b);

  for (std::size_t sweep = 0; sweep < cfg.max_iter; ++sweep) {
    prev.data = b.data;
    // Sequential block updates: rows j < i already refreshed this sweep.
    for (std::size_t i = 0; i < n; ++i) {
      std::fill(gi.begin(), gi.end(), 0.0);
      if (p.a.sparse) {
        for (std::size_t q = p.a.row_ptr[i]; q < p.a.row_ptr[i + 1]; ++q) {
          const std::size_t j = p.a.col_idx[q];
          if (j == i) continue;
          const double aij = p.a.vals[q];
          const double* bj = b.row(j);
          for (std::size_t c = 0; c < r; ++c) gi[c] += aij * bj[c];
        }
      } else {
        const double* ai = p.a.dense.data() + i * n;
        for (std::size_t j = 0; j < n; ++j) {
          if (j == i) continue;
          const double aij = ai[j];
          const double* bj = b.row(j);
          for (std::size_t c = 0; c < r; ++c) gi[c] += aij * bj[c];
        }
      }
      double s = 0.0;
      for (std::size_t c = 0; c < r; ++c) s += gi[c] * gi[c];
      const double nrm = std::sqrt(s);
      if (nrm < kZeroRowTol) continue;  // keep the current row
      double* bi = b.row(i);
      for (std::size_t c = 0; c < r; ++c) bi[c] = gi[c] / nrm;
    }
    kernels::matmul(p.a, b, prod);
    const double obj = kernels::frob_dot(prod, b);
    const double step = kernels::frob_diff_norm(b, prev);
    res.trace.rows.push_back({sweep, obj, 0.0, step, elapsed_s(start)});
    if (opts.record_iterates) res.iterates.push_back(b);

    if (mats_equal(b, prev)) {
      status = TerminationStatus::IterateRepeated;
      break;
    }
    if (cfg.tol_step > 0.0 && step <= cfg.tol_step) {
      status = TerminationStatus::StepConverged;
      break;
    }
    if (cfg.wall_time_limit && elapsed_s(start) > *cfg.wall_time_limit) {
      status = TerminationStatus::TimeLimit;
      break;
    }
  }
  res.status = status.value_or(TerminationStatus::MaxIter);
  res.trace.status = res.status;
  res.final_factor = BmFactor{std::move(b)};
  return res;
}

double choose_sigma(const SymMatrix& a, double gamma) {
  if (gamma <= 0.0) throw std::invalid_argument("choose_sigma: gamma must be > 0");
  const double lmin = kernels::estimate_lambda_min(a);
  return std::max(0.0, -lmin) + gamma;
}

SymMatrix gen_gaussian_sym(std::size_t n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("gen_gaussian_sym: n must be >= 1");
  Rng rng(seed);
  Mat g(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) g(i, j) = rng.normal();
  Mat a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = (g(i, j) + g(j, i)) / static_cast<double>(n);
  return SymMatrix::dense_from(std::move(a));
}

namespace {

[[noreturn]] void parse_fail(std::size_t line_no, const std::string& what) {
  throw ParseError("matrix market: line " + std::to_string(line_no) + ": " + what);
}

}  // namespace

SymMatrix parse_matrix_market(const std::string& text, std::string* warning) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;

  if (!std::getline(in, line)) parse_fail(1, "missing banner");
  ++line_no;
  {
    std::istringstream ls(line);
    std::string banner, object, format, field, symmetry;
    ls >> banner >> object >> format >> field >> symmetry;
    for (auto* s : {&object, &format, &field, &symmetry})
      std::transform(s->begin(), s->end(), s->begin(),
                     [](unsigned char c) { return std::tolower(c); });
    if (banner != "%%MatrixMarket" || object != "matrix") parse_fail(line_no, "bad banner");
    if (format != "coordinate") parse_fail(line_no, "only coordinate format is supported");
    if (field != "real" && field != "integer")
      parse_fail(line_no, "only real/integer fields are supported");
    if (symmetry != "general" && symmetry != "symmetric")
      parse_fail(line_no, "only general/symmetric matrices are supported");
    const bool symmetric = (symmetry == "symmetric");

    std::size_t rows = 0, cols = 0, nnz = 0;
    bool have_sizes = false;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty() || line[0] == '%') continue;
      std::istringstream sz(line);
      if (!(sz >> rows >> cols >> nnz)) parse_fail(line_no, "bad size line");
      have_sizes = true;
      break;
    }
    if (!have_sizes) parse_fail(line_no + 1, "missing size line");
    if (rows != cols) parse_fail(line_no, "matrix must be square");

    std::vector<std::tuple<std::size_t, std::size_t, double>> trip;
    trip.reserve(2 * nnz);
    std::size_t seen = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty() || line[0] == '%') continue;
      std::istringstream es(line);
      long long i = 0, j = 0;
      double v = 0.0;
      if (!(es >> i >> j >> v)) parse_fail(line_no, "bad entry");
      if (i < 1 || j < 1 || static_cast<std::size_t>(i) > rows ||
          static_cast<std::size_t>(j) > cols)
        throw IndexOutOfRangeError("matrix market: line " + std::to_string(line_no) +
                                   ": index out of range");
      const std::size_t ii = static_cast<std::size_t>(i - 1);
      const std::size_t jj = static_cast<std::size_t>(j - 1);
      if (symmetric) {
        trip.emplace_back(ii, jj, v);
        if (ii != jj) trip.emplace_back(jj, ii, v);
      } else {
        // (M + M^T)/2
        trip.emplace_back(ii, jj, v / 2.0);
        trip.emplace_back(jj, ii, v / 2.0);
      }
      ++seen;
    }
    if (seen != nnz) parse_fail(line_no, "entry count does not match header");
    if (!symmetric && warning)
      *warning = "general matrix symmetrized as (M + M^T)/2";

    // Distinct coordinates decide the storage kind (95% zero density).
    std::vector<std::pair<std::size_t, std::size_t>> coords;
    coords.reserve(trip.size());
    for (const auto& [ti, tj, tv] : trip) coords.emplace_back(ti, tj);
    std::sort(coords.begin(), coords.end());
    coords.erase(std::unique(coords.begin(), coords.end()), coords.end());
    const double density =
        rows ? static_cast<double>(coords.size()) / (static_cast<double>(rows) * rows) : 0.0;
    return SymMatrix::from_triplets(rows, trip, density < 0.05);
  }
}

SymMatrix load_matrix_market(const std::string& path, std::string* warning) {
  std::ifstream f(path);
  if (!f) throw ParseError("matrix market: cannot open " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_matrix_market(ss.str(), warning);
}

BmFactor random_b0(std::size_t n, std::size_t r, std::uint64_t seed) {
  Rng rng(seed);
  Mat b(n, r);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < r; ++j) {
      b(i, j) = rng.normal();
      s += b(i, j) * b(i, j);
    }
    const double nrm = std::sqrt(s);
    if (nrm < 1e-12) {
      b(i, 0) = 1.0;
      for (std::size_t j = 1; j < r; ++j) b(i, j) = 0.0;
    } else {
      for (std::size_t j = 0; j < r; ++j) b(i, j) /= nrm;
    }
  }
  return BmFactor{std::move(b)};
}

Objective flattened_objective(const MaxcutProblem& p) {
  const SymMatrix shifted = p.a.shifted(p.sigma);
  const std::size_t n = p.a.n, r = p.r;
  Objective obj;
  obj.dim = n * r;
  obj.alpha = 0.0;  // callers supply the exact modulus when they know lambda_min
  obj.lipschitz = 2.0 * shifted.gershgorin();
  obj.eval = [shifted, n, r](const Vec& x) {
    Mat b(n, r);
    b.data = x;
    Mat g;
    kernels::matmul(shifted, b, g);
    return kernels::frob_dot(g, b);
  };
  obj.grad = [shifted, n, r](const Vec& x) {
    Mat b(n, r);
    b.data = x;
    Mat g;
    kernels::matmul(shifted, b, g);
    for (double& v : g.data) v *= 2.0;
    return std::move(g.data);
  };
  return obj;
}

Vec flatten(const BmFactor& f) { return f.b.data; }

BmFactor unflatten(const Vec& x, std::size_t n, std::size_t r) {
  if (x.size() != n * r) throw ShapeMismatchError("unflatten: size mismatch");
  Mat b(n, r);
  b.data = x;
  return BmFactor{std::move(b)};
}

}  // namespace gfwopt::maxcut
