#ifndef GFWOPT_SIMPLEX_HPP_
#define GFWOPT_SIMPLEX_HPP_

#include <optional>
#include <string>
#include <vector>

#include "gfwopt/core.hpp"
#include "gfwopt/linalg.hpp"

namespace gfwopt::lp {

struct NumericalBreakdownError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// min c^T x  s.t.  A x = b, x >= 0
struct LpStandardForm {
  std::size_t m = 0, n = 0;
  Mat a;  // m x n
  Vec b;  // m
  Vec c;  // n
};

void validate(const LpStandardForm& p);

enum class LpStatus { Optimal, Infeasible, Unbounded };

const char* to_string(LpStatus s);

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  Vec x;
  double objective = 0.0;
  std::vector<std::size_t> basis;  // ascending
  Vec reduced_costs;
  bool has_alternative_optima = false;
};

// Two-phase primal simplex on a dense tableau, Bland's rule throughout.
// Deterministic: identical input bytes give identical output bytes. The
// final point is recomputed from the (sorted) optimal basis so that it
// depends only on the basis, not on the pivot path.
LpSolution solve_lp(const LpStandardForm& p);

// One zero-reduced-cost pivot from sol's basis; first candidate (smallest
// entering index) whose vertex differs from sol.x by > 1e-9 in inf-norm.
std::optional<Vec> alternative_vertex(const LpStandardForm& p, const LpSolution& sol);

// All distinct vertices reachable by one zero-reduced-cost pivot.
std::vector<Vec> alternative_vertices(const LpStandardForm& p, const LpSolution& sol);

// Brute force over column subsets; n <= 16 and C(n, m) <= 20000.
std::vector<Vec> enumerate_vertices(const LpStandardForm& p);

// Phase-one feasibility probe; unlike solve_lp it accepts m > n systems
// (membership checks add rows).
bool feasible(const LpStandardForm& p);

std::string lp_to_json(const LpStandardForm& p);
LpStandardForm lp_from_json(const std::string& text);

}  // namespace gfwopt::lp

#endif  // GFWOPT_SIMPLEX_HPP_
