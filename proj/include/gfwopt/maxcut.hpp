#ifndef GFWOPT_MAXCUT_HPP_
#define GFWOPT_MAXCUT_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "gfwopt/core.hpp"
#include "gfwopt/kernels.hpp"

namespace gfwopt::maxcut {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IndexOutOfRangeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Burer-Monteiro factor: n x r with unit-norm rows.
struct BmFactor {
  Mat b;
  std::size_t n() const { return b.rows; }
  std::size_t r() const { return b.cols; }
};

bool factor_feasible(const BmFactor& f, double tol = 1e-10);

struct MaxcutProblem {
  SymMatrix a;
  std::size_t r = 1;
  double sigma = 0.0;
};

// <A, B B^T> computed as <A B, B>; the sigma*n shift constant is excluded.
double maxcut_objective(const MaxcutProblem& p, const BmFactor& f);

// One GFW step on the shifted model: row-normalize (A + sigma I) B, zero
// rows keeping the previous row.
BmFactor gfw_maxcut_step(const MaxcutProblem& p, const BmFactor& bk);

struct McOptions {
  bool record_iterates = false;
};

struct McRunResult {
  BmFactor final_factor;
  GfwTrace trace;  // objective excludes the shift; fw_gap is <G, B+ - B>
  TerminationStatus status = TerminationStatus::MaxIter;
  std::vector<Mat> iterates;  // populated when requested
};

// Specialized GFW loop over the product of spheres; iterates are bitwise
// identical to the generic engine on the flattened objective.
McRunResult run_gfw_maxcut(const MaxcutProblem& p, const BmFactor& b0, const GfwConfig& cfg,
                           const McOptions& opts = {});

// Sequential block-coordinate maximization (one trace row per sweep);
// ignores sigma, the diagonal never enters the block gradient.
McRunResult run_bcm(const MaxcutProblem& p, const BmFactor& b0, const GfwConfig& cfg,
                    const McOptions& opts = {});

// max(0, -lambda_min estimate) + gamma via power iteration on mu I - A.
double choose_sigma(const SymMatrix& a, double gamma);

// A = (G + G^T)/n with standard normal G; always dense.
SymMatrix gen_gaussian_sym(std::size_t n, std::uint64_t seed);

// Matrix Market coordinate reader (real/integer, general/symmetric).
// General inputs are symmetrized as (M + M^T)/2 and *warning is set.
// Storage switches to CSR above 95% zero density.
SymMatrix load_matrix_market(const std::string& path, std::string* warning = nullptr);
SymMatrix parse_matrix_market(const std::string& text, std::string* warning = nullptr);

BmFactor random_b0(std::size_t n, std::size_t r, std::uint64_t seed);

// Flattened quadratic <A + sigma I, B B^T> over row-major vec(B); shares the
// kernels with run_gfw_maxcut so generic-engine runs match it bitwise.
Objective flattened_objective(const MaxcutProblem& p);

Vec flatten(const BmFactor& f);
BmFactor unflatten(const Vec& x, std::size_t n, std::size_t r);

}  // namespace gfwopt::maxcut

#endif  // GFWOPT_MAXCUT_HPP_
