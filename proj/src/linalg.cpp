#include "gfwopt/linalg.hpp"

#include <cassert>
#include <cmath>
#include <cstring>
#include <stdexcept>

namespace gfwopt {

double dot(const Vec& a, const Vec& b) {
  assert(a.size() == b.size());
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double nrm2(const Vec& a) {
  double s = 0.0;
  for (double v : a) s += v * v;
  return std::sqrt(s);
}

double nrm_inf(const Vec& a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::fabs(v));
  return m;
}

Vec sub(const Vec& a, const Vec& b) {
  assert(a.size() == b.size());
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

Vec matvec(const Mat& a, const Vec& x) {
  assert(a.cols == x.size());
  Vec y(a.rows, 0.0);
  for (std::size_t i = 0; i < a.rows; ++i) {
    const double* r = a.row(i);
    double s = 0.0;
    for (std::size_t j = 0; j < a.cols; ++j) s += r[j] * x[j];
    y[i] = s;
  }
  return y;
}

Vec matvec_t(const Mat& a, const Vec& x) {
  assert(a.rows == x.size());
  Vec y(a.cols, 0.0);
  for (std::size_t i = 0; i < a.rows; ++i) {
    const double* r = a.row(i);
    for (std::size_t j = 0; j < a.cols; ++j) y[j] += r[j] * x[i];
  }
  return y;
}

double max_asymmetry(const Mat& a) {
  assert(a.rows == a.cols);
  double m = 0.0;
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t j = i + 1; j < a.cols; ++j)
      m = std::max(m, std::fabs(a(i, j) - a(j, i)));
  return m;
}

double gershgorin_bound(const Mat& a) {
  assert(a.rows == a.cols);
  double m = 0.0;
  for (std::size_t i = 0; i < a.rows; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.cols; ++j) s += std::fabs(a(i, j));
    m = std::max(m, s);
  }
  return m;
}

namespace {

// One full cyclic sweep of Jacobi rotations; returns the off-diagonal
// Frobenius mass before the sweep.
double jacobi_sweep(Mat& a, Mat* v) {
  const std::size_t n = a.rows;
  double off = 0.0;
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = p + 1; q < n; ++q) {
      const double apq = a(p, q);
      if (std::fabs(apq) < 1e-300) continue;
      const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
      const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                       (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
      const double c = 1.0 / std::sqrt(t * t + 1.0);
      const double s = t * c;
      for (std::size_t k = 0; k < n; ++k) {
        const double akp = a(k, p), akq = a(k, q);
        a(k, p) = c * akp - s * akq;
        a(k, q) = s * akp + c * akq;
      }
      for (std::size_t k = 0; k < n; ++k) {
        const double apk = a(p, k), aqk = a(q, k);
        a(p, k) = c * apk - s * aqk;
        a(q, k) = s * apk + c * aqk;
      }
      if (v) {
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = (*v)(k, p), vkq = (*v)(k, q);
          (*v)(k, p) = c * vkp - s * vkq;
          (*v)(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  return off;
}

}  // namespace

void jacobi_eigen(const Mat& a_in, std::vector<double>& evals, Mat& evecs) {
  if (a_in.rows != a_in.cols) throw std::invalid_argument("jacobi_eigen: square matrix required");
  const std::size_t n = a_in.rows;
  Mat a = a_in;
  evecs = Mat(n, n, 0.0);
  for (std::size_t i = 0; i < n; ++i) evecs(i, i) = 1.0;
  for (int sweep = 0; sweep < 100; ++sweep) {
    if (jacobi_sweep(a, &evecs) < 1e-26) break;
  }
  evals.resize(n);
  for (std::size_t i = 0; i < n; ++i) evals[i] = a(i, i);
  // Sort ascending, permuting eigenvector columns alongside.
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  for (std::size_t i = 0; i + 1 < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (evals[order[j]] < evals[order[i]]) std::swap(order[i], order[j]);
  std::vector<double> ev(n);
  Mat vv(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    ev[j] = evals[order[j]];
    for (std::size_t i = 0; i < n; ++i) vv(i, j) = evecs(i, order[j]);
  }
  evals = ev;
  evecs = vv;
}

std::vector<double> jacobi_eigenvalues(const Mat& a) {
  std::vector<double> evals;
  Mat evecs;
  jacobi_eigen(a, evals, evecs);
  return evals;
}

bool bitwise_equal(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) return false;
  if (a.empty()) return true;
  return std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace gfwopt
