#include "gfwopt/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "gfwopt/rng.hpp"

namespace gfwopt {

SymMatrix SymMatrix::dense_from(Mat m) {
  if (m.rows != m.cols) throw std::invalid_argument("SymMatrix: square matrix required");
  SymMatrix s;
  s.n = m.rows;
  s.sparse = false;
  s.dense = std::move(m.data);
  return s;
}

SymMatrix SymMatrix::from_triplets(
    std::size_t n, const std::vector<std::tuple<std::size_t, std::size_t, double>>& t,
    bool make_sparse) {
  SymMatrix s;
  s.n = n;
  if (!make_sparse) {
    s.sparse = false;
    s.dense.assign(n * n, 0.0);
    for (const auto& [i, j, v] : t) s.dense[i * n + j] += v;
    return s;
  }
  s.sparse = true;
  std::map<std::pair<std::size_t, std::size_t>, double> acc;
  for (const auto& [i, j, v] : t) acc[{i, j}] += v;
  s.row_ptr.assign(n + 1, 0);
  for (const auto& [ij, v] : acc) s.row_ptr[ij.first + 1]++;
  for (std::size_t i = 0; i < n; ++i) s.row_ptr[i + 1] += s.row_ptr[i];
  s.col_idx.reserve(acc.size());
  s.vals.reserve(acc.size());
  for (const auto& [ij, v] : acc) {  // map iterates (row, col) ascending
    s.col_idx.push_back(ij.second);
    s.vals.push_back(v);
  }
  return s;
}

double SymMatrix::at(std::size_t i, std::size_t j) const {
  if (!sparse) return dense[i * n + j];
  for (std::size_t p = row_ptr[i]; p < row_ptr[i + 1]; ++p)
    if (col_idx[p] == j) return vals[p];
  return 0.0;
}

double SymMatrix::zero_fraction() const {
  if (n == 0) return 1.0;
  if (sparse) {
    std::size_t nz = 0;
    for (double v : vals) nz += (v != 0.0);
    return 1.0 - static_cast<double>(nz) / (static_cast<double>(n) * n);
  }
  std::size_t nz = 0;
  for (double v : dense) nz += (v != 0.0);
  return 1.0 - static_cast<double>(nz) / dense.size();
}

Mat SymMatrix::to_dense() const {
  Mat m(n, n, 0.0);
  if (!sparse) {
    m.data = dense;
    return m;
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t p = row_ptr[i]; p < row_ptr[i + 1]; ++p) m(i, col_idx[p]) += vals[p];
  return m;
}

SymMatrix SymMatrix::shifted(double sigma) const {
  SymMatrix s = *this;
  if (!sparse) {
    for (std::size_t i = 0; i < n; ++i) s.dense[i * n + i] += sigma;
    return s;
  }
  // Rebuild CSR with a guaranteed diagonal entry per row.
  std::vector<std::tuple<std::size_t, std::size_t, double>> t;
  t.reserve(vals.size() + n);
  for (std::size_t i = 0; i < n; ++i) {
    bool diag_seen = false;
    for (std::size_t p = row_ptr[i]; p < row_ptr[i + 1]; ++p) {
      double v = vals[p];
      if (col_idx[p] == i) {
        v += sigma;
        diag_seen = true;
      }
      t.emplace_back(i, col_idx[p], v);
    }
    if (!diag_seen) t.emplace_back(i, i, sigma);
  }
  return from_triplets(n, t, true);
}

double SymMatrix::gershgorin() const {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    if (sparse) {
      for (std::size_t p = row_ptr[i]; p < row_ptr[i + 1]; ++p) s += std::fabs(vals[p]);
    } else {
      for (std::size_t j = 0; j < n; ++j) s += std::fabs(dense[i * n + j]);
    }
    m = std::max(m, s);
  }
  return m;
}

namespace kernels {

namespace {

inline void matmul_row(const SymMatrix& a, const Mat& b, Mat& out, std::size_t i) {
  const std::size_t r = b.cols;
  double* o = out.row(i);
  for (std::size_t c = 0; c < r; ++c) o[c] = 0.0;
  if (a.sparse) {
    for (std::size_t p = a.row_ptr[i]; p < a.row_ptr[i + 1]; ++p) {
      const double aij = a.vals[p];
      const double* bj = b.row(a.col_idx[p]);
      for (std::size_t c = 0; c < r; ++c) o[c] += aij * bj[c];
    }
  } else {
    const double* ar = a.dense.data() + i * a.n;
    for (std::size_t j = 0; j < a.n; ++j) {
      const double aij = ar[j];
      const double* bj = b.row(j);
      for (std::size_t c = 0; c < r; ++c) o[c] += aij * bj[c];
    }
  }
}

inline void normalize_row(const Mat& g, const Mat& prev, Mat& out, double zero_tol,
                          std::size_t i) {
  const std::size_t r = g.cols;
  const double* gi = g.row(i);
  double* o = out.row(i);
  double s = 0.0;
  for (std::size_t c = 0; c < r; ++c) s += gi[c] * gi[c];
  const double nrm = std::sqrt(s);
  if (nrm < zero_tol) {
    if (prev.rows == g.rows && prev.cols == r) {
      const double* pi = prev.row(i);
      for (std::size_t c = 0; c < r; ++c) o[c] = pi[c];
    } else {
      for (std::size_t c = 0; c < r; ++c) o[c] = (c == 0) ? 1.0 : 0.0;
    }
    return;
  }
  for (std::size_t c = 0; c < r; ++c) o[c] = gi[c] / nrm;
}

inline double row_dot(const Mat& a, const Mat& b, std::size_t i) {
  const double* x = a.row(i);
  const double* y = b.row(i);
  double s = 0.0;
  for (std::size_t c = 0; c < a.cols; ++c) s += x[c] * y[c];
  return s;
}

inline double row_diff_sq(const Mat& a, const Mat& b, std::size_t i) {
  const double* x = a.row(i);
  const double* y = b.row(i);
  double s = 0.0;
  for (std::size_t c = 0; c < a.cols; ++c) {
    const double d = x[c] - y[c];
    s += d * d;
  }
  return s;
}

void check_mm(const SymMatrix& a, const Mat& b, Mat& out) {
  if (b.rows != a.n) throw std::invalid_argument("matmul: row count mismatch");
  if (out.rows != a.n || out.cols != b.cols) out = Mat(a.n, b.cols);
}

}  // namespace

void matmul_serial(const SymMatrix& a, const Mat& b, Mat& out) {
  check_mm(a, b, out);
  for (std::size_t i = 0; i < a.n; ++i) matmul_row(a, b, out, i);
}

void matmul(const SymMatrix& a, const Mat& b, Mat& out) {
  check_mm(a, b, out);
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(a.n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) matmul_row(a, b, out, static_cast<std::size_t>(i));
}

void row_normalize_serial(const Mat& g, const Mat& prev, Mat& out, double zero_tol) {
  if (out.rows != g.rows || out.cols != g.cols) out = Mat(g.rows, g.cols);
  for (std::size_t i = 0; i < g.rows; ++i) normalize_row(g, prev, out, zero_tol, i);
}

void row_normalize(const Mat& g, const Mat& prev, Mat& out, double zero_tol) {
  if (out.rows != g.rows || out.cols != g.cols) out = Mat(g.rows, g.cols);
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(g.rows);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) normalize_row(g, prev, out, zero_tol, static_cast<std::size_t>(i));
}

double frob_dot_serial(const Mat& a, const Mat& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows; ++i) s += row_dot(a, b, i);
  return s;
}

double frob_dot(const Mat& a, const Mat& b) {
  std::vector<double> part(a.rows);
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(a.rows);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) part[i] = row_dot(a, b, static_cast<std::size_t>(i));
  double s = 0.0;
  for (double v : part) s += v;
  return s;
}

double frob_diff_norm_serial(const Mat& a, const Mat& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows; ++i) s += row_diff_sq(a, b, i);
  return std::sqrt(s);
}

double frob_diff_norm(const Mat& a, const Mat& b) {
  std::vector<double> part(a.rows);
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(a.rows);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) part[i] = row_diff_sq(a, b, static_cast<std::size_t>(i));
  double s = 0.0;
  for (double v : part) s += v;
  return std::sqrt(s);
}

double estimate_lambda_min(const SymMatrix& a, std::size_t iters) {
  const std::size_t n = a.n;
  if (n == 0) throw std::invalid_argument("estimate_lambda_min: empty matrix");
  if (n == 1) return a.at(0, 0);
  const double mu = a.gershgorin();
  if (mu == 0.0) return 0.0;  // zero matrix

  // Power iteration on M = mu*I - A (PSD; dominant eigenvalue mu - lambda_min).
  Mat v(n, 1), w(n, 1);
  Rng rng(0x9e3779b97f4a7c15ULL ^ n);
  for (std::size_t i = 0; i < n; ++i) v(i, 0) = rng.normal();
  {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += v(i, 0) * v(i, 0);
    const double nv = std::sqrt(s);
    for (std::size_t i = 0; i < n; ++i) v(i, 0) /= nv;
  }
  for (std::size_t it = 0; it < iters; ++it) {
    matmul(a, v, w);
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      w(i, 0) = mu * v(i, 0) - w(i, 0);
      s += w(i, 0) * w(i, 0);
    }
    const double nw = std::sqrt(s);
    if (nw < 1e-300) {  // M annihilates v: lambda_max(M) reached exactly at 0
      return mu;
    }
    for (std::size_t i = 0; i < n; ++i) v(i, 0) = w(i, 0) / nw;
  }
  // Rayleigh quotient v^T M v.
  matmul(a, v, w);
  double q = 0.0;
  for (std::size_t i = 0; i < n; ++i) q += v(i, 0) * (mu * v(i, 0) - w(i, 0));
  return mu - q;
}

}  // namespace kernels

}  // namespace gfwopt
