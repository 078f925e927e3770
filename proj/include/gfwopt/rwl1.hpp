#ifndef GFWOPT_RWL1_HPP_
#define GFWOPT_RWL1_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "gfwopt/core.hpp"
#include "gfwopt/simplex.hpp"

namespace gfwopt::rwl1 {

// Noiseless compressed-sensing instance: unit-norm Gaussian columns,
// s-sparse Gaussian signal, b = A x_true.
struct SparseInstance {
  std::size_t n = 0, m = 0, s = 0;
  Mat a;  // m x n
  Vec x_true;
  Vec b;
  std::uint64_t seed = 0;
};

SparseInstance gen_sparse_instance(std::size_t n, std::size_t m, std::size_t s,
                                   std::uint64_t seed);

enum class RwKind { Coupled, Split };

struct RwVariant {
  RwKind kind = RwKind::Split;
  double epsilon = 0.1;
};

// Reweighting vector in R^{2n} for the split point (x+, x-):
//   Coupled: w+_i = w-_i = 1/(x+_i + x-_i + eps)
//   Split:   w+_i = 1/(x+_i + eps), w-_i = 1/(x-_i + eps)
// This equals grad(-g) of the matching log objective.
Vec rw_weights(const RwVariant& v, const Vec& xp, const Vec& xm);

// Feasible polytope over (x+, x-): [A -A](x+, x-) = b, both parts >= 0.
lp::LpStandardForm make_recovery_lp(const SparseInstance& inst);

// Maximized objective g = -f on R^{2n}:
//   Split:   f = sum log(eps + x+_i) + log(eps + x-_i)
//   Coupled: f = sum log(eps + x+_i + x-_i)
Objective make_log_objective(const RwVariant& v, std::size_t n);

struct RwlResult {
  Vec x_hat;         // x+ - x-
  GfwTrace trace;
  Vec split_point;   // final (x+, x-)
  Vec initial_point;  // the unweighted l1 vertex both variants start from
  double max_coordinate = 0.0;  // over all iterates; post-hoc strong concavity bound
  std::size_t cg_iters = 0;     // GFW steps (LP solves past the l1 initializer)
};

RwlResult run_rwl1(const SparseInstance& inst, const RwVariant& variant, const GfwConfig& cfg);

struct TrialRow {
  std::string variant;  // l1 | rwl1 | rwl1_split
  std::size_t s = 0, trial = 0;
  std::uint64_t seed = 0;
  bool recovered = false;
  std::size_t cg_iters = 0;
  double time_s = 0.0;
  double rel_err = 0.0;
};

struct LevelStats {
  std::string variant;
  std::size_t s = 0;
  std::size_t trials = 0, successes = 0;
  double mean_cg_iters = 0.0;
  double mean_time_s = 0.0;
  double rate() const { return trials ? static_cast<double>(successes) / trials : 0.0; }
};

struct RecoveryStats {
  std::vector<TrialRow> rows;      // sorted by (variant, s, trial)
  std::vector<LevelStats> levels;  // same key order
};

struct ExperimentParams {
  std::size_t n = 256, m = 100;
  std::vector<std::size_t> s_grid;
  std::size_t trials = 20;
  double epsilon = 0.1;
  double tol = 1e-3;
  std::uint64_t seed = 0;
  int jobs = 1;
};

// Runs the plain-l1 baseline plus both reweighted variants per trial.
// Success is relative l2 error <= 1e-3.
RecoveryStats recovery_experiment(const ExperimentParams& p);

std::string recovery_csv(const RecoveryStats& st, bool zero_times = false);

// LP fixture JSON of the recovery polytope plus x_true/s/seed.
std::string instance_to_json(const SparseInstance& inst);
SparseInstance instance_from_json(const std::string& text);

}  // namespace gfwopt::rwl1

#endif  // GFWOPT_RWL1_HPP_
