#ifndef GFWOPT_LINALG_HPP_
#define GFWOPT_LINALG_HPP_

#include <cstddef>
#include <vector>

namespace gfwopt {

using Vec = std::vector<double>;

// Dense row-major matrix. Small enough for everything outside the
// Max-Cut kernels, which use SymMatrix (kernels.hpp) instead.
struct Mat {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Mat() = default;
  Mat(std::size_t r, std::size_t c, double fill = 0.0)
      : rows(r), cols(c), data(r * c, fill) {}

  double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

  double* row(std::size_t i) { return data.data() + i * cols; }
  const double* row(std::size_t i) const { return data.data() + i * cols; }
};

double dot(const Vec& a, const Vec& b);
double nrm2(const Vec& a);
double nrm_inf(const Vec& a);
Vec sub(const Vec& a, const Vec& b);
// y = A x
Vec matvec(const Mat& a, const Vec& x);
// y = A^T x
Vec matvec_t(const Mat& a, const Vec& x);

double max_asymmetry(const Mat& a);
// max_i sum_j |a_ij|; upper bound on the spectral radius of a symmetric matrix.
double gershgorin_bound(const Mat& a);

// Cyclic Jacobi for small dense symmetric matrices. Eigenvalues ascending.
std::vector<double> jacobi_eigenvalues(const Mat& a);
// Also returns eigenvectors as columns of v, paired with ascending eigenvalues.
void jacobi_eigen(const Mat& a, std::vector<double>& evals, Mat& evecs);

bool bitwise_equal(const Vec& a, const Vec& b);

}  // namespace gfwopt

#endif  // GFWOPT_LINALG_HPP_
