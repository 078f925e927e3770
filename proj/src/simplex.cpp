#include "gfwopt/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "json.hpp"

namespace gfwopt::lp {

namespace {

constexpr double kRcTol = 1e-9;       // reduced-cost / alternative-optima threshold
constexpr double kPivotTol = 1e-11;   // below this a pivot is numerically unusable
constexpr double kSingularTol = 1e-12;
constexpr int kRefactorEvery = 50;

// Dense tableau over a fixed column set. basis[i] is the variable of row i;
// T is m x (ncols+1) with the rhs in the last column.
struct Tableau {
  std::size_t m = 0, ncols = 0;
  const Mat* cols = nullptr;  // m x ncols
  const Vec* rhs = nullptr;   // m
  Vec cost;                   // ncols
  Mat t;                      // m x (ncols+1)
  Vec rc;                     // ncols
  std::vector<std::size_t> basis;
  std::vector<char> in_basis;
  int pivots_since_refactor = 0;

  // T = B^-1 [cols | rhs] via Gauss-Jordan with partial pivoting. Sorts the
  // basis first so the result depends only on the basis set.
  void rebuild() {
    std::sort(basis.begin(), basis.end());
    in_basis.assign(ncols, 0);
    for (std::size_t v : basis) in_basis[v] = 1;
    // W = [B | cols | rhs]
    const std::size_t w = m + ncols + 1;
    Mat work(m, w, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t k = 0; k < m; ++k) work(i, k) = (*cols)(i, basis[k]);
      for (std::size_t j = 0; j < ncols; ++j) work(i, m + j) = (*cols)(i, j);
      work(i, w - 1) = (*rhs)[i];
    }
    for (std::size_t k = 0; k < m; ++k) {
      std::size_t piv = k;
      for (std::size_t i = k + 1; i < m; ++i)
        if (std::fabs(work(i, k)) > std::fabs(work(piv, k))) piv = i;
      if (std::fabs(work(piv, k)) < kSingularTol)
        throw NumericalBreakdownError("simplex: singular basis during refactorization");
      if (piv != k)
        for (std::size_t j = k; j < w; ++j) std::swap(work(k, j), work(piv, j));
      const double d = work(k, k);
      for (std::size_t j = k; j < w; ++j) work(k, j) /= d;
      for (std::size_t i = 0; i < m; ++i) {
        if (i == k) continue;
        const double f = work(i, k);
        if (f == 0.0) continue;
        for (std::size_t j = k; j < w; ++j) work(i, j) -= f * work(k, j);
      }
    }
    // Row i of the reduced [cols|rhs] block corresponds to basis[i] after the
    // Gauss-Jordan: B-block is I, so row order already matches basis order.
    t = Mat(m, ncols + 1);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < ncols; ++j) t(i, j) = work(i, m + j);
      t(i, ncols) = work(i, w - 1);
    }
    recompute_rc();
    pivots_since_refactor = 0;
  }

  void recompute_rc() {
    rc.assign(ncols, 0.0);
    for (std::size_t j = 0; j < ncols; ++j) {
      double s = cost[j];
      for (std::size_t i = 0; i < m; ++i) s -= cost[basis[i]] * t(i, j);
      rc[j] = s;
    }
  }

  double objective() const {
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) s += cost[basis[i]] * t(i, ncols);
    return s;
  }

  void pivot(std::size_t row, std::size_t col) {
    const double p = t(row, col);
    for (std::size_t j = 0; j <= ncols; ++j) t(row, j) /= p;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == row) continue;
      const double f = t(i, col);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j <= ncols; ++j) t(i, j) -= f * t(row, j);
    }
    const double frc = rc[col];
    if (frc != 0.0)
      for (std::size_t j = 0; j < ncols; ++j) rc[j] -= frc * t(row, j);
    in_basis[basis[row]] = 0;
    basis[row] = col;
    in_basis[col] = 1;
    if (++pivots_since_refactor >= kRefactorEvery) rebuild();
  }

  // Bland: smallest-index eligible entering column below limit_col.
  std::optional<std::size_t> entering_bland(std::size_t limit_col) const {
    for (std::size_t j = 0; j < limit_col; ++j)
      if (!in_basis[j] && rc[j] < -kRcTol) return j;
    return std::nullopt;
  }

  // Dantzig: most negative reduced cost, ties to the smaller index.
  std::optional<std::size_t> entering_dantzig(std::size_t limit_col) const {
    std::optional<std::size_t> best;
    for (std::size_t j = 0; j < limit_col; ++j)
      if (!in_basis[j] && rc[j] < -kRcTol && (!best || rc[j] < rc[*best])) best = j;
    return best;
  }

  // Min-ratio row for column col. Degeneracy makes ratios tie up to
  // rounding, so rows within a small tolerance of the minimum count as tied.
  // Ties break to the largest pivot element (numerical stability) in normal
  // mode, to the smallest basis variable index in Bland mode (anti-cycling).
  // Slightly negative basic values (rounding) are clamped to zero in the
  // ratios. nullopt means no usable pivot: *breakdown set if positive
  // entries exist but all are below the pivot tolerance.
  std::optional<std::size_t> ratio_row(std::size_t col, bool bland_ties, bool* breakdown,
                                       double* theta = nullptr) const {
    *breakdown = false;
    double min_ratio = std::numeric_limits<double>::infinity();
    bool tiny_positive = false;
    for (std::size_t i = 0; i < m; ++i) {
      const double d = t(i, col);
      if (d > 0.0 && d <= kPivotTol) tiny_positive = true;
      if (d <= kPivotTol) continue;
      min_ratio = std::min(min_ratio, std::max(0.0, t(i, ncols)) / d);
    }
    if (min_ratio == std::numeric_limits<double>::infinity()) {
      if (tiny_positive) *breakdown = true;
      return std::nullopt;
    }
    if (theta) *theta = min_ratio;
    // Harris-style band: rows within a small tolerance of the best ratio are
    // interchangeable; prefer the largest pivot element among them, or the
    // smallest basis index in Bland mode.
    const double tie_tol = 1e-9 * (1.0 + min_ratio);
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < m; ++i) {
      const double d = t(i, col);
      if (d <= kPivotTol) continue;
      const double ratio = std::max(0.0, t(i, ncols)) / d;
      if (ratio > min_ratio + tie_tol) continue;
      if (!best) {
        best = i;
      } else if (bland_ties) {
        if (basis[i] < basis[*best]) best = i;
      } else if (d > t(*best, col) || (d == t(*best, col) && basis[i] < basis[*best])) {
        best = i;
      }
    }
    return best;
  }
};

enum class PhaseOutcome { Optimal, Unbounded };

// Dantzig entering by default; a run of degenerate pivots flips to Bland's
// rule until a nondegenerate pivot lands, which breaks any cycle (cycles are
// all-degenerate) while keeping the usual pivot counts far below pure
// Bland's index creep. Fully deterministic.
PhaseOutcome run_phase(Tableau& tab, std::size_t limit_col) {
  // Long all-degenerate stretches are normal on these polytopes (hundreds at
  // m ~ 100), so the brake engages well beyond that scale.
  const std::size_t kDegenerateStreakLimit = std::max<std::size_t>(500, 10 * tab.m);
  constexpr double kDegenerateTheta = 1e-11;
  const std::size_t pivot_cap = 50000 + 200 * (tab.m + tab.ncols);
  bool bland = false;
  std::size_t degen_streak = 0;
  for (std::size_t count = 0;; ++count) {
    if (count > pivot_cap)
      throw NumericalBreakdownError("simplex: pivot limit exceeded");
    auto col = bland ? tab.entering_bland(limit_col) : tab.entering_dantzig(limit_col);
    if (!col) return PhaseOutcome::Optimal;
    bool breakdown = false;
    double theta = 0.0;
    auto row = tab.ratio_row(*col, bland, &breakdown, &theta);
    if (breakdown)
      throw NumericalBreakdownError("simplex: pivot magnitude below 1e-11");
    if (!row) return PhaseOutcome::Unbounded;
    tab.pivot(*row, *col);
    if (theta > kDegenerateTheta) {
      degen_streak = 0;
      bland = false;
    } else if (++degen_streak >= kDegenerateStreakLimit) {
      bland = true;
    }
  }
}

struct PhaseOneResult {
  Mat cols;  // m' x n (possibly fewer rows after redundancy removal)
  Vec rhs;
  std::vector<std::size_t> basis;
  bool feasible = false;
};

PhaseOneResult phase_one(const LpStandardForm& p) {
  const std::size_t m = p.m, n = p.n;
  PhaseOneResult out;
  Mat cols(m, n + m, 0.0);
  Vec rhs(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double sgn = (p.b[i] < 0.0) ? -1.0 : 1.0;
    for (std::size_t j = 0; j < n; ++j) cols(i, j) = sgn * p.a(i, j);
    cols(i, n + i) = 1.0;
    rhs[i] = sgn * p.b[i];
  }
  Tableau tab;
  tab.m = m;
  tab.ncols = n + m;
  tab.cols = &cols;
  tab.rhs = &rhs;
  tab.cost.assign(n + m, 0.0);
  for (std::size_t i = 0; i < m; ++i) tab.cost[n + i] = 1.0;
  tab.basis.resize(m);
  for (std::size_t i = 0; i < m; ++i) tab.basis[i] = n + i;
  tab.rebuild();

  // Artificials never re-enter: entering scan limited to the original columns.
  if (run_phase(tab, n) == PhaseOutcome::Unbounded)
    throw NumericalBreakdownError("simplex: phase one unbounded");
  const double feas_tol = 1e-8 * (1.0 + nrm_inf(p.b));
  if (tab.objective() > feas_tol) {
    out.feasible = false;
    return out;
  }

  // Drive remaining artificials out of the basis. Refactorization inside
  // pivot() can reorder rows, so rescan from scratch after every pivot.
  // An artificial whose tableau row has no usable original entry marks a
  // redundant constraint; its home row gets dropped below.
  std::vector<char> unresolvable(m, 0);
  for (;;) {
    std::optional<std::size_t> row;
    for (std::size_t r = 0; r < m; ++r) {
      if (tab.basis[r] >= n && !unresolvable[tab.basis[r] - n]) {
        row = r;
        break;
      }
    }
    if (!row) break;
    std::optional<std::size_t> col;
    for (std::size_t j = 0; j < n; ++j) {
      if (!tab.in_basis[j] && std::fabs(tab.t(*row, j)) > 1e-9) {
        col = j;
        break;
      }
    }
    if (col) {
      tab.pivot(*row, *col);
    } else {
      unresolvable[tab.basis[*row] - n] = 1;
    }
  }
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < m; ++i) {
    bool still_basic = false;
    for (std::size_t r = 0; r < m; ++r)
      if (tab.basis[r] == n + i) still_basic = true;
    if (!still_basic) keep.push_back(i);
  }
  out.cols = Mat(keep.size(), n, 0.0);
  out.rhs.resize(keep.size());
  for (std::size_t r = 0; r < keep.size(); ++r) {
    for (std::size_t j = 0; j < n; ++j) out.cols(r, j) = cols(keep[r], j);
    out.rhs[r] = rhs[keep[r]];
  }
  for (std::size_t v : tab.basis)
    if (v < n) out.basis.push_back(v);
  if (out.basis.size() != keep.size())
    throw NumericalBreakdownError("simplex: basis bookkeeping failed after phase one");
  out.feasible = true;
  return out;
}

// Canonical extraction: sorted basis, fresh factorization, nonbasic exactly 0.
void extract_solution(const LpStandardForm& p, const Mat& cols, const Vec& rhs,
                      std::vector<std::size_t> basis, LpSolution* sol) {
  Tableau tab;
  tab.m = rhs.size();
  tab.ncols = p.n;
  tab.cols = &cols;
  tab.rhs = &rhs;
  tab.cost = p.c;
  tab.basis = std::move(basis);
  tab.rebuild();
  sol->x.assign(p.n, 0.0);
  for (std::size_t i = 0; i < tab.m; ++i) sol->x[tab.basis[i]] = tab.t(i, p.n);
  sol->objective = dot(p.c, sol->x);
  sol->basis = tab.basis;
  sol->reduced_costs = tab.rc;
  for (std::size_t v : tab.basis) sol->reduced_costs[v] = 0.0;
  sol->has_alternative_optima = false;
  for (std::size_t j = 0; j < p.n; ++j)
    if (!tab.in_basis[j] && std::fabs(sol->reduced_costs[j]) <= kRcTol)
      sol->has_alternative_optima = true;
}

}  // namespace

void validate(const LpStandardForm& p) {
  if (p.a.rows != p.m || p.a.cols != p.n)
    throw std::invalid_argument("LpStandardForm: matrix shape mismatch");
  if (p.b.size() != p.m || p.c.size() != p.n)
    throw std::invalid_argument("LpStandardForm: vector size mismatch");
  if (p.m > p.n) throw std::invalid_argument("LpStandardForm: m must be <= n");
  for (double v : p.a.data)
    if (!std::isfinite(v)) throw std::invalid_argument("LpStandardForm: non-finite entry in A");
  for (double v : p.b)
    if (!std::isfinite(v)) throw std::invalid_argument("LpStandardForm: non-finite entry in b");
  for (double v : p.c)
    if (!std::isfinite(v)) throw std::invalid_argument("LpStandardForm: non-finite entry in c");
}

const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::Optimal:
      return "Optimal";
    case LpStatus::Infeasible:
      return "Infeasible";
    case LpStatus::Unbounded:
      return "Unbounded";
  }
  return "Unknown";
}

bool feasible(const LpStandardForm& p) {
  if (p.a.rows != p.m || p.a.cols != p.n || p.b.size() != p.m)
    throw std::invalid_argument("feasible: shape mismatch");
  try {
    return phase_one(p).feasible;
  } catch (const NumericalBreakdownError&) {
    return false;
  }
}

LpSolution solve_lp(const LpStandardForm& p) {
  validate(p);
  LpSolution sol;
  PhaseOneResult ph1 = phase_one(p);
  if (!ph1.feasible) {
    sol.status = LpStatus::Infeasible;
    return sol;
  }
  Tableau tab;
  tab.m = ph1.rhs.size();
  tab.ncols = p.n;
  tab.cols = &ph1.cols;
  tab.rhs = &ph1.rhs;
  tab.cost = p.c;
  tab.basis = ph1.basis;
  tab.rebuild();
  if (run_phase(tab, p.n) == PhaseOutcome::Unbounded) {
    sol.status = LpStatus::Unbounded;
    return sol;
  }
  sol.status = LpStatus::Optimal;
  extract_solution(p, ph1.cols, ph1.rhs, tab.basis, &sol);
  return sol;
}

namespace {

// Shared candidate walk for the alternative-optima queries. Appends every
// distinct vertex reachable by one zero-reduced-cost pivot; stops after the
// first when first_only.
void collect_alternatives(const LpStandardForm& p, const LpSolution& sol, bool first_only,
                          std::vector<Vec>* out) {
  if (sol.status != LpStatus::Optimal)
    throw std::invalid_argument("alternative_vertex: solution not optimal");
  // Reconstruct the (possibly row-reduced) system the solution basis lives
  // in: rerun phase one so redundant rows drop identically.
  PhaseOneResult ph1 = phase_one(p);
  if (!ph1.feasible) throw std::invalid_argument("alternative_vertex: infeasible problem");
  for (std::size_t j = 0; j < p.n; ++j) {
    bool basic = std::find(sol.basis.begin(), sol.basis.end(), j) != sol.basis.end();
    if (basic || std::fabs(sol.reduced_costs[j]) > kRcTol) continue;
    Tableau tab;
    tab.m = ph1.rhs.size();
    tab.ncols = p.n;
    tab.cols = &ph1.cols;
    tab.rhs = &ph1.rhs;
    tab.cost = p.c;
    tab.basis = sol.basis;
    tab.rebuild();
    bool breakdown = false;
    auto row = tab.ratio_row(j, false, &breakdown);
    if (!row) continue;  // ray or numerically unusable: no vertex this way
    tab.pivot(*row, j);
    LpSolution cand;
    extract_solution(p, ph1.cols, ph1.rhs, tab.basis, &cand);
    double maxd = 0.0;
    for (std::size_t i = 0; i < p.n; ++i)
      maxd = std::max(maxd, std::fabs(cand.x[i] - sol.x[i]));
    if (maxd <= 1e-9) continue;  // degenerate pivot: same geometric point
    bool dup = false;
    for (const Vec& seen : *out) {
      double d = 0.0;
      for (std::size_t i = 0; i < p.n; ++i) d = std::max(d, std::fabs(seen[i] - cand.x[i]));
      if (d <= 1e-9) dup = true;
    }
    if (!dup) out->push_back(cand.x);
    if (first_only && !out->empty()) return;
  }
}

}  // namespace

std::optional<Vec> alternative_vertex(const LpStandardForm& p, const LpSolution& sol) {
  std::vector<Vec> out;
  collect_alternatives(p, sol, true, &out);
  if (out.empty()) return std::nullopt;
  return out.front();
}

std::vector<Vec> alternative_vertices(const LpStandardForm& p, const LpSolution& sol) {
  std::vector<Vec> out;
  collect_alternatives(p, sol, false, &out);
  return out;
}

std::vector<Vec> enumerate_vertices(const LpStandardForm& p) {
  validate(p);
  if (p.n > 16) throw TooLargeError("enumerate_vertices: n > 16");
  // C(n, m) with an early cap.
  double comb = 1.0;
  for (std::size_t i = 0; i < p.m; ++i) comb = comb * static_cast<double>(p.n - i) / (i + 1);
  if (comb > 20000.0) throw TooLargeError("enumerate_vertices: C(n, m) > 20000");

  std::vector<Vec> verts;
  std::vector<std::size_t> idx(p.m);
  for (std::size_t i = 0; i < p.m; ++i) idx[i] = i;
  const std::size_t m = p.m, n = p.n;
  bool done = (m == 0);
  while (!done) {
    // Solve B x_B = b for the current column subset.
    Mat w(m, m + 1, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t k = 0; k < m; ++k) w(i, k) = p.a(i, idx[k]);
      w(i, m) = p.b[i];
    }
    bool singular = false;
    for (std::size_t k = 0; k < m && !singular; ++k) {
      std::size_t piv = k;
      for (std::size_t i = k + 1; i < m; ++i)
        if (std::fabs(w(i, k)) > std::fabs(w(piv, k))) piv = i;
      if (std::fabs(w(piv, k)) < 1e-10) {
        singular = true;
        break;
      }
      if (piv != k)
        for (std::size_t j = k; j <= m; ++j) std::swap(w(k, j), w(piv, j));
      const double d = w(k, k);
      for (std::size_t j = k; j <= m; ++j) w(k, j) /= d;
      for (std::size_t i = 0; i < m; ++i) {
        if (i == k) continue;
        const double f = w(i, k);
        if (f == 0.0) continue;
        for (std::size_t j = k; j <= m; ++j) w(i, j) -= f * w(k, j);
      }
    }
    if (!singular) {
      bool feas = true;
      for (std::size_t i = 0; i < m; ++i)
        if (w(i, m) < -1e-9) feas = false;
      if (feas) {
        Vec x(n, 0.0);
        for (std::size_t i = 0; i < m; ++i) x[idx[i]] = w(i, m);
        bool dup = false;
        for (const Vec& seen : verts) {
          double d = 0.0;
          for (std::size_t i = 0; i < n; ++i) d = std::max(d, std::fabs(seen[i] - x[i]));
          if (d <= 1e-9) dup = true;
        }
        if (!dup) verts.push_back(std::move(x));
      }
    }
    // Next lexicographic subset.
    std::size_t i = m;
    while (i > 0) {
      --i;
      if (idx[i] != i + n - m) {
        ++idx[i];
        for (std::size_t j = i + 1; j < m; ++j) idx[j] = idx[j - 1] + 1;
        break;
      }
      if (i == 0) done = true;
    }
  }
  return verts;
}

std::string lp_to_json(const LpStandardForm& p) {
  nlohmann::json j;
  j["m"] = p.m;
  j["n"] = p.n;
  j["A"] = p.a.data;
  j["b"] = p.b;
  j["c"] = p.c;
  return j.dump(2) + "\n";
}

LpStandardForm lp_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  LpStandardForm p;
  p.m = j.at("m").get<std::size_t>();
  p.n = j.at("n").get<std::size_t>();
  p.a = Mat(p.m, p.n);
  p.a.data = j.at("A").get<std::vector<double>>();
  if (p.a.data.size() != p.m * p.n)
    throw std::invalid_argument("lp_from_json: A has wrong length");
  p.b = j.at("b").get<Vec>();
  p.c = j.at("c").get<Vec>();
  validate(p);
  return p;
}

}  // namespace gfwopt::lp
