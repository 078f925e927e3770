#ifndef GFWOPT_SPCA_HPP_
#define GFWOPT_SPCA_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "gfwopt/core.hpp"

namespace gfwopt::spca {

// max x^T (A + sigma I) x  s.t.  |x|_2 = 1, |x|_0 <= k. Reported objectives
// drop the constant sigma (x^T A x on the sphere).
struct SpcaProblem {
  Mat a;
  std::size_t k = 1;
  double sigma = 0.0;
};

void validate(const SpcaProblem& p);

RunResult run_spca(const SpcaProblem& p, const Vec& x0, const GfwConfig& cfg);

double reported_objective(const SpcaProblem& p, const Vec& x);  // x^T A x

struct BruteResult {
  Vec x;  // embedded leading eigenvector of the best principal submatrix
  double value = 0.0;
  std::vector<std::size_t> support;
};

// Exhaustive over supports; n <= 12 and C(n, k) <= 1000. Ties keep the
// lexicographically smallest support.
BruteResult brute_force_spca(const Mat& a, std::size_t k);

struct RestartRow {
  std::size_t restart = 0;
  double final_obj = 0.0;  // x^T A x
  std::size_t iters = 0;
  TerminationStatus status = TerminationStatus::MaxIter;
  std::vector<std::size_t> support;
  Vec x;
};

struct MultistartResult {
  std::vector<RestartRow> rows;
  std::size_t best_index = 0;
};

// Random feasible starts: uniform size-k support, normalized Gaussian values.
MultistartResult spca_multistart(const SpcaProblem& p, std::size_t restarts,
                                 const GfwConfig& cfg, std::uint64_t seed);

// max(0, -lambda_min estimate) + 0.1
double default_sigma(const Mat& a);

// CSV restart,final_obj,iters,status,support plus an optional gap column
// against a known global value (support joined with ';').
std::string multistart_csv(const MultistartResult& res, const double* global_value = nullptr);

}  // namespace gfwopt::spca

#endif  // GFWOPT_SPCA_HPP_
