#ifndef GFWOPT_KERNELS_HPP_
#define GFWOPT_KERNELS_HPP_

#include <cstddef>
#include <cstdint>
#include <tuple>
#include <vector>

#include "gfwopt/linalg.hpp"

namespace gfwopt {

// Symmetric n-by-n matrix, dense row-major or CSR depending on fill.
// CSR is selected automatically above 95% zero density (load paths);
// construction via dense_from/from_triplets keeps both variants symmetric.
struct SymMatrix {
  std::size_t n = 0;
  bool sparse = false;
  std::vector<double> dense;  // n*n when !sparse
  std::vector<std::size_t> row_ptr, col_idx;  // CSR when sparse
  std::vector<double> vals;

  static SymMatrix dense_from(Mat m);
  static SymMatrix from_triplets(std::size_t n,
                                 const std::vector<std::tuple<std::size_t, std::size_t, double>>& t,
                                 bool make_sparse);

  double at(std::size_t i, std::size_t j) const;
  double zero_fraction() const;
  Mat to_dense() const;
  // A + sigma*I in the same storage kind (CSR gains explicit diagonal entries).
  SymMatrix shifted(double sigma) const;
  // max_i sum_j |a_ij|
  double gershgorin() const;
};

namespace kernels {

// out = A * B. The parallel variant partitions output rows across threads;
// each row is accumulated in the same order as the serial variant, so the
// two are bitwise identical for any thread count.
void matmul_serial(const SymMatrix& a, const Mat& b, Mat& out);
void matmul(const SymMatrix& a, const Mat& b, Mat& out);

// Row-wise normalization of g; rows with norm < zero_tol fall back to the
// matching row of prev (prev may be empty, then e1).
void row_normalize_serial(const Mat& g, const Mat& prev, Mat& out, double zero_tol);
void row_normalize(const Mat& g, const Mat& prev, Mat& out, double zero_tol);

// sum_ij a_ij * b_ij, accumulated per row then reduced over rows in index
// order (deterministic under both variants).
double frob_dot_serial(const Mat& a, const Mat& b);
double frob_dot(const Mat& a, const Mat& b);

double frob_diff_norm_serial(const Mat& a, const Mat& b);
double frob_diff_norm(const Mat& a, const Mat& b);

// Smallest eigenvalue estimate: power iteration on mu*I - A with mu the
// Gershgorin bound, seeded deterministic start.
double estimate_lambda_min(const SymMatrix& a, std::size_t iters = 500);

}  // namespace kernels

}  // namespace gfwopt

#endif  // GFWOPT_KERNELS_HPP_
