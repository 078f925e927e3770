#ifndef GFWOPT_ORACLES_HPP_
#define GFWOPT_ORACLES_HPP_

#include <memory>
#include <optional>
#include <vector>

#include "gfwopt/core.hpp"
#include "gfwopt/linalg.hpp"
#include "gfwopt/simplex.hpp"

namespace gfwopt {

// Linear maximization oracle over a nonempty compact set X:
// solve(c) returns some x* in argmax{ c^T x : x in X }. Implementations are
// deterministic with a fixed smallest-index tie-break, which the engine's
// exact repetition detection relies on.
class LinearMaxOracle {
 public:
  virtual ~LinearMaxOracle() = default;
  virtual std::size_t dim() const = 0;
  virtual Vec solve(const Vec& c) const = 0;
  // Variant receiving the previous iterate; only oracles with a zero-input
  // fallback (product of spheres) use it.
  virtual Vec solve_from(const Vec& c, const Vec& /*prev*/) const { return solve(c); }
  // Membership within 1e-9 per constraint.
  virtual bool contains(const Vec& x) const = 0;
};

// Explicit finite point set; smallest index among exact ties.
class FinitePointSetOracle final : public LinearMaxOracle {
 public:
  explicit FinitePointSetOracle(std::vector<Vec> points);
  std::size_t dim() const override { return dim_; }
  Vec solve(const Vec& c) const override;
  bool contains(const Vec& x) const override;
  const std::vector<Vec>& points() const { return points_; }

 private:
  std::vector<Vec> points_;
  std::size_t dim_;
};

// {x : |x|_2 = 1, |x|_0 <= k}. Closed form: keep the k largest-magnitude
// entries of c (ties to the smaller index), normalize.
class SphereCardinalityOracle final : public LinearMaxOracle {
 public:
  SphereCardinalityOracle(std::size_t dim, std::size_t k);
  std::size_t dim() const override { return dim_; }
  std::size_t cardinality() const { return k_; }
  Vec solve(const Vec& c) const override;
  bool contains(const Vec& x) const override;

 private:
  std::size_t dim_;
  std::size_t k_;
};

// Cartesian product of n_rows unit spheres in R^r; operates on flattened
// row-major n_rows x r matrices. Rows of c below 1e-14 fall back to the
// matching row of the previous iterate (e1 if unavailable).
class ProductOfSpheresOracle final : public LinearMaxOracle {
 public:
  ProductOfSpheresOracle(std::size_t n_rows, std::size_t r);
  std::size_t dim() const override { return n_rows_ * r_; }
  std::size_t rows() const { return n_rows_; }
  std::size_t row_dim() const { return r_; }
  Vec solve(const Vec& c) const override;
  Vec solve_from(const Vec& c, const Vec& prev) const override;
  bool contains(const Vec& x) const override;

 private:
  std::size_t n_rows_, r_;
};

// Polytope in standard form, optionally composed with an affine output map
// x = M z + t (identity when absent). Every query is solved cold from
// scratch, so outputs depend only on the query vector.
class LpBackedOracle final : public LinearMaxOracle {
 public:
  explicit LpBackedOracle(lp::LpStandardForm base);
  LpBackedOracle(lp::LpStandardForm base, Mat output_map, Vec output_offset);

  std::size_t dim() const override { return out_dim_; }
  Vec solve(const Vec& c) const override;
  bool contains(const Vec& x) const override;

  // Distinct optimal vertices (mapped) adjacent to the optimum of
  // max{c^T x}: the strict-variant stall escape.
  std::vector<Vec> alternative_outputs(const Vec& c) const;
  // All polytope vertices, mapped and deduplicated (test scale only).
  std::vector<Vec> enumerate_outputs() const;

  const lp::LpStandardForm& base() const { return base_; }
  Vec map_output(const Vec& z) const;

  void set_cache_enabled(bool on) { cache_enabled_ = on; }
  const std::optional<lp::LpSolution>& last_solution() const { return last_; }

 private:
  lp::LpStandardForm make_query(const Vec& c) const;

  lp::LpStandardForm base_;
  bool mapped_ = false;
  Mat map_;
  Vec offset_;
  std::size_t out_dim_;
  bool cache_enabled_ = false;  // diagnostic only; off under concurrent use
  mutable std::optional<lp::LpSolution> last_;
};

// Pass-through decorator capturing every solve output; reconstructs iterate
// sequences for diagnostics without touching the engine signature.
class RecordingOracle final : public LinearMaxOracle {
 public:
  explicit RecordingOracle(const LinearMaxOracle& inner) : inner_(&inner) {}
  std::size_t dim() const override { return inner_->dim(); }
  Vec solve(const Vec& c) const override;
  Vec solve_from(const Vec& c, const Vec& prev) const override;
  bool contains(const Vec& x) const override { return inner_->contains(x); }
  const std::vector<Vec>& outputs() const { return outputs_; }
  void clear() { outputs_.clear(); }

 private:
  const LinearMaxOracle* inner_;
  mutable std::vector<Vec> outputs_;
};

}  // namespace gfwopt

#endif  // GFWOPT_ORACLES_HPP_
