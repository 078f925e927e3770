#include "gfwopt/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace gfwopt {

namespace {
constexpr double kContainTol = 1e-9;
constexpr double kZeroTol = 1e-14;
}  // namespace

// ---------------------------------------------------------------- finite set

FinitePointSetOracle::FinitePointSetOracle(std::vector<Vec> points)
    : points_(std::move(points)) {
  if (points_.empty())
    throw std::invalid_argument("FinitePointSetOracle: empty point list");
  dim_ = points_.front().size();
  for (const Vec& p : points_)
    if (p.size() != dim_)
      throw std::invalid_argument("FinitePointSetOracle: inconsistent dimensions");
}

Vec FinitePointSetOracle::solve(const Vec& c) const {
  std::size_t best = 0;
  double best_val = dot(c, points_[0]);
  for (std::size_t i = 1; i < points_.size(); ++i) {
    const double v = dot(c, points_[i]);
    if (v > best_val) {
      best_val = v;
      best = i;
    }
  }
  return points_[best];
}

bool FinitePointSetOracle::contains(const Vec& x) const {
  if (x.size() != dim_) return false;
  for (const Vec& p : points_) {
    double d = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) d = std::max(d, std::fabs(p[i] - x[i]));
    if (d <= kContainTol) return true;
  }
  return false;
}

// --------------------------------------------------------- sphere w/ card k

SphereCardinalityOracle::SphereCardinalityOracle(std::size_t dim, std::size_t k)
    : dim_(dim), k_(k) {
  if (k_ < 1 || k_ > dim_)
    throw std::invalid_argument("SphereCardinalityOracle: k must be in [1, dim]");
}

Vec SphereCardinalityOracle::solve(const Vec& c) const {
  if (c.size() != dim_) throw ShapeMismatchError("SphereCardinalityOracle: dim mismatch");
  if (nrm_inf(c) < kZeroTol)
    throw ZeroGradientError("SphereCardinalityOracle: zero input has no unique argmax");
  std::vector<std::size_t> idx(dim_);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&c](std::size_t a, std::size_t b) {
    const double fa = std::fabs(c[a]), fb = std::fabs(c[b]);
    if (fa != fb) return fa > fb;
    return a < b;
  });
  double norm_sq = 0.0;
  for (std::size_t i = 0; i < k_; ++i) norm_sq += c[idx[i]] * c[idx[i]];
  const double nrm = std::sqrt(norm_sq);
  Vec out(dim_, 0.0);
  for (std::size_t i = 0; i < k_; ++i) out[idx[i]] = c[idx[i]] / nrm;
  return out;
}

bool SphereCardinalityOracle::contains(const Vec& x) const {
  if (x.size() != dim_) return false;
  std::size_t nnz = 0;
  for (double v : x) nnz += (std::fabs(v) > kContainTol);
  return nnz <= k_ && std::fabs(nrm2(x) - 1.0) <= kContainTol;
}

// ------------------------------------------------------- product of spheres

ProductOfSpheresOracle::ProductOfSpheresOracle(std::size_t n_rows, std::size_t r)
    : n_rows_(n_rows), r_(r) {
  if (n_rows_ == 0 || r_ == 0)
    throw std::invalid_argument("ProductOfSpheresOracle: empty shape");
}

Vec ProductOfSpheresOracle::solve(const Vec& c) const {
  return solve_from(c, Vec{});
}

Vec ProductOfSpheresOracle::solve_from(const Vec& c, const Vec& prev) const {
  if (c.size() != dim()) throw ShapeMismatchError("ProductOfSpheresOracle: dim mismatch");
  const bool have_prev = prev.size() == dim();
  Vec out(dim());
  for (std::size_t i = 0; i < n_rows_; ++i) {
    const double* ci = c.data() + i * r_;
    double s = 0.0;
    for (std::size_t j = 0; j < r_; ++j) s += ci[j] * ci[j];
    const double nrm = std::sqrt(s);
    double* oi = out.data() + i * r_;
    if (nrm < kZeroTol) {
      if (have_prev) {
        const double* pi = prev.data() + i * r_;
        for (std::size_t j = 0; j < r_; ++j) oi[j] = pi[j];
      } else {
        for (std::size_t j = 0; j < r_; ++j) oi[j] = (j == 0) ? 1.0 : 0.0;
      }
    } else {
      for (std::size_t j = 0; j < r_; ++j) oi[j] = ci[j] / nrm;
    }
  }
  return out;
}

bool ProductOfSpheresOracle::contains(const Vec& x) const {
  if (x.size() != dim()) return false;
  for (std::size_t i = 0; i < n_rows_; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < r_; ++j) s += x[i * r_ + j] * x[i * r_ + j];
    if (std::fabs(std::sqrt(s) - 1.0) > kContainTol) return false;
  }
  return true;
}

// ------------------------------------------------------------------ LP back

LpBackedOracle::LpBackedOracle(lp::LpStandardForm base)
    : base_(std::move(base)), mapped_(false), out_dim_(base_.n) {
  lp::validate(base_);
}

LpBackedOracle::LpBackedOracle(lp::LpStandardForm base, Mat output_map, Vec output_offset)
    : base_(std::move(base)),
      mapped_(true),
      map_(std::move(output_map)),
      offset_(std::move(output_offset)),
      out_dim_(map_.rows) {
  lp::validate(base_);
  if (map_.cols != base_.n || offset_.size() != map_.rows)
    throw std::invalid_argument("LpBackedOracle: output map shape mismatch");
}

Vec LpBackedOracle::map_output(const Vec& z) const {
  if (!mapped_) return z;
  Vec x = matvec(map_, z);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] += offset_[i];
  return x;
}

lp::LpStandardForm LpBackedOracle::make_query(const Vec& c) const {
  lp::LpStandardForm q = base_;
  // max c^T (M z + t) over z == min (-M^T c)^T z.
  Vec clp = mapped_ ? matvec_t(map_, c) : c;
  for (double& v : clp) v = -v;
  q.c = std::move(clp);
  return q;
}

Vec LpBackedOracle::solve(const Vec& c) const {
  if (c.size() != out_dim_) throw ShapeMismatchError("LpBackedOracle: dim mismatch");
  const lp::LpStandardForm q = make_query(c);
  lp::LpSolution sol = lp::solve_lp(q);
  if (sol.status != lp::LpStatus::Optimal)
    throw OracleFailureError(std::string("LpBackedOracle: LP status ") +
                             lp::to_string(sol.status));
  if (cache_enabled_) last_ = sol;
  return map_output(sol.x);
}

bool LpBackedOracle::contains(const Vec& x) const {
  if (x.size() != out_dim_) return false;
  if (!mapped_) {
    for (double v : x)
      if (v < -kContainTol) return false;
    const Vec ax = matvec(base_.a, x);
    for (std::size_t i = 0; i < base_.m; ++i)
      if (std::fabs(ax[i] - base_.b[i]) > kContainTol * (1.0 + std::fabs(base_.b[i])))
        return false;
    return true;
  }
  // Membership through the map needs a feasibility solve on the augmented
  // system {A z = b, M z = x - t, z >= 0}.
  lp::LpStandardForm aug;
  aug.m = base_.m + map_.rows;
  aug.n = base_.n;
  aug.a = Mat(aug.m, aug.n, 0.0);
  aug.b.assign(aug.m, 0.0);
  aug.c.assign(aug.n, 0.0);
  for (std::size_t i = 0; i < base_.m; ++i) {
    for (std::size_t j = 0; j < base_.n; ++j) aug.a(i, j) = base_.a(i, j);
    aug.b[i] = base_.b[i];
  }
  for (std::size_t i = 0; i < map_.rows; ++i) {
    for (std::size_t j = 0; j < base_.n; ++j) aug.a(base_.m + i, j) = map_(i, j);
    aug.b[base_.m + i] = x[i] - offset_[i];
  }
  return lp::feasible(aug);
}

std::vector<Vec> LpBackedOracle::alternative_outputs(const Vec& c) const {
  const lp::LpStandardForm q = make_query(c);
  lp::LpSolution sol = lp::solve_lp(q);
  if (sol.status != lp::LpStatus::Optimal)
    throw OracleFailureError("LpBackedOracle: LP not optimal in alternative_outputs");
  std::vector<Vec> out;
  for (const Vec& z : lp::alternative_vertices(q, sol)) out.push_back(map_output(z));
  return out;
}

std::vector<Vec> LpBackedOracle::enumerate_outputs() const {
  std::vector<Vec> raw = lp::enumerate_vertices(base_);
  std::vector<Vec> out;
  for (const Vec& z : raw) {
    Vec x = map_output(z);
    bool dup = false;
    for (const Vec& seen : out) {
      double d = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) d = std::max(d, std::fabs(seen[i] - x[i]));
      if (d <= 1e-9) dup = true;
    }
    if (!dup) out.push_back(std::move(x));
  }
  return out;
}

// ---------------------------------------------------------------- recording

Vec RecordingOracle::solve(const Vec& c) const {
  Vec out = inner_->solve(c);
  outputs_.push_back(out);
  return out;
}

Vec RecordingOracle::solve_from(const Vec& c, const Vec& prev) const {
  Vec out = inner_->solve_from(c, prev);
  outputs_.push_back(out);
  return out;
}

}  // namespace gfwopt
