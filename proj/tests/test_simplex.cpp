#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "gfwopt/rng.hpp"
#include "gfwopt/simplex.hpp"

using namespace gfwopt;
using namespace gfwopt::lp;

namespace {

LpStandardForm make_lp(std::size_t m, std::size_t n, std::initializer_list<double> a,
                       std::initializer_list<double> b, std::initializer_list<double> c) {
  LpStandardForm p;
  p.m = m;
  p.n = n;
  p.a = Mat(m, n);
  std::copy(a.begin(), a.end(), p.a.data.begin());
  p.b = Vec(b);
  p.c = Vec(c);
  return p;
}

// Independent dual from the final basis: solve B^T y = c_B by Gaussian
// elimination (test-side, no solver internals).
Vec basis_dual(const LpStandardForm& p, const LpSolution& sol) {
  const std::size_t m = sol.basis.size();
  Mat w(m, m + 1, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) w(i, j) = p.a(j, sol.basis[i]);  // B^T
    w(i, m) = p.c[sol.basis[i]];
  }
  for (std::size_t k = 0; k < m; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < m; ++i)
      if (std::fabs(w(i, k)) > std::fabs(w(piv, k))) piv = i;
    for (std::size_t j = k; j <= m; ++j) std::swap(w(k, j), w(piv, j));
    const double d = w(k, k);
    for (std::size_t j = k; j <= m; ++j) w(k, j) /= d;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == k) continue;
      const double f = w(i, k);
      for (std::size_t j = k; j <= m; ++j) w(i, j) -= f * w(k, j);
    }
  }
  Vec y(m);
  for (std::size_t i = 0; i < m; ++i) y[i] = w(i, m);
  return y;
}

}  // namespace

TEST_CASE("solve_lp on the unit-simplex edge problem") {
  // min -x1 - x2 s.t. x1 + x2 + s = 1: optimum -1 on the x1+x2=1 edge.
  auto p = make_lp(1, 3, {1, 1, 1}, {1}, {-1, -1, 0});
  auto sol = solve_lp(p);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.objective == doctest::Approx(-1.0));
  CHECK(sol.has_alternative_optima);
  // Bland from the all-artificial start lands on the smallest-index vertex.
  CHECK(sol.x[0] == doctest::Approx(1.0));
  CHECK(sol.x[1] == doctest::Approx(0.0));
}

TEST_CASE("solve_lp trivial and infeasible cases") {
  auto p = make_lp(1, 2, {1, 1}, {1}, {1, 0});
  auto sol = solve_lp(p);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.objective == doctest::Approx(0.0));
  CHECK(sol.x[0] == doctest::Approx(0.0));
  CHECK(sol.x[1] == doctest::Approx(1.0));

  auto inf = make_lp(1, 1, {1}, {-1}, {0});
  CHECK(solve_lp(inf).status == LpStatus::Infeasible);

  // min -x1 with x1 free to grow: unbounded
  auto unb = make_lp(1, 2, {0, 1}, {1}, {-1, 0});
  CHECK(solve_lp(unb).status == LpStatus::Unbounded);
}

TEST_CASE("alternative_vertex walks the optimal edge") {
  auto p = make_lp(1, 3, {1, 1, 1}, {1}, {-1, -1, 0});
  auto sol = solve_lp(p);
  REQUIRE(sol.status == LpStatus::Optimal);
  auto alt = alternative_vertex(p, sol);
  REQUIRE(alt.has_value());
  CHECK((*alt)[0] == doctest::Approx(0.0));
  CHECK((*alt)[1] == doctest::Approx(1.0));
  CHECK(dot(p.c, *alt) == doctest::Approx(sol.objective).epsilon(1e-9));

  // unique optimum: none
  auto pu = make_lp(1, 2, {1, 1}, {1}, {1, 2});
  auto solu = solve_lp(pu);
  CHECK(!solu.has_alternative_optima);
  CHECK(!alternative_vertex(pu, solu).has_value());
}

TEST_CASE("alternative_vertex degenerate pivot returns none") {
  // x1 + x2 = 0 pins the origin; c = (1,1) makes the nonbasic rc zero, but
  // the pivot stays at the same geometric point.
  auto p = make_lp(1, 2, {1, 1}, {0}, {1, 1});
  auto sol = solve_lp(p);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.objective == doctest::Approx(0.0));
  CHECK(sol.has_alternative_optima);
  CHECK(!alternative_vertex(p, sol).has_value());
}

TEST_CASE("enumerate_vertices on canonical sets") {
  auto simplex3 = make_lp(1, 3, {1, 1, 1}, {1}, {0, 0, 0});
  auto v = enumerate_vertices(simplex3);
  CHECK(v.size() == 3);

  // unit square with two slacks
  auto square = make_lp(2, 4, {1, 0, 1, 0, 0, 1, 0, 1}, {1, 1}, {0, 0, 0, 0});
  CHECK(enumerate_vertices(square).size() == 4);

  LpStandardForm big;
  big.m = 8;
  big.n = 17;
  big.a = Mat(8, 17, 0.0);
  big.b.assign(8, 0.0);
  big.c.assign(17, 0.0);
  CHECK_THROWS_AS(enumerate_vertices(big), TooLargeError);
}

TEST_CASE("enumerate_vertices matches the independent fixture") {
  // Expected set computed by exhaustive basis enumeration with numpy.
  auto p = make_lp(3, 6,
                   {1, 2, 0, 1, 0, 0,  //
                    0, 1, 1, 0, 1, 0,  //
                    1, 1, 1, 1, 1, 1},
                   {1, 2, 4}, {1, -2, 0.5, 3, -1, 0});
  auto v = enumerate_vertices(p);
  CHECK(v.size() == 6);
  const std::vector<Vec> expected = {
      {0, 0, 0, 1, 2, 1},       {0, 0, 2, 1, 0, 1},     {0, 0.5, 0, 0, 1.5, 2},
      {0, 0.5, 1.5, 0, 0, 2},   {1, 0, 0, 0, 2, 1},     {1, 0, 2, 0, 0, 1}};
  for (const Vec& e : expected) {
    bool found = false;
    for (const Vec& got : v) {
      double d = 0.0;
      for (std::size_t i = 0; i < 6; ++i) d = std::max(d, std::fabs(e[i] - got[i]));
      if (d <= 1e-8) found = true;
    }
    CHECK(found);
  }
  // solve_lp agrees with the brute-force minimum -2.5
  auto sol = solve_lp(p);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.objective == doctest::Approx(-2.5));
}

TEST_CASE("solve_lp equals vertex enumeration on seeded bounded instances") {
  Rng rng(2024);
  int solved = 0;
  for (int rep = 0; rep < 220; ++rep) {
    const std::size_t m = 2 + rng.index(5);       // 2..6
    const std::size_t n = m + 1 + rng.index(12 - m);  // m+1..12
    Mat a(m, n);
    for (std::size_t j = 0; j < n; ++j) a(m - 1, j) = 1.0;  // bounding row
    for (std::size_t i = 0; i + 1 < m; ++i)
      for (std::size_t j = 0; j < n; ++j) a(i, j) = rng.normal();
    Vec x0(n, 0.0);
    for (std::size_t j = 0; j < n; ++j)
      if (rng.uniform() < 0.5) x0[j] = rng.uniform();
    if (nrm_inf(x0) == 0.0) x0[0] = 1.0;
    LpStandardForm p;
    p.m = m;
    p.n = n;
    p.a = a;
    p.b = matvec(a, x0);
    p.c.resize(n);
    for (auto& v : p.c) v = rng.normal();

    LpSolution sol = solve_lp(p);  // any breakdown fails the test
    REQUIRE(sol.status == LpStatus::Optimal);
    ++solved;

    auto verts = enumerate_vertices(p);
    REQUIRE(!verts.empty());
    double best = dot(p.c, verts[0]);
    for (const Vec& v : verts) best = std::min(best, dot(p.c, v));
    CHECK(std::fabs(sol.objective - best) <= 1e-7 * (1.0 + std::fabs(best)));

    // solution invariants
    const Vec ax = matvec(p.a, sol.x);
    for (std::size_t i = 0; i < m; ++i)
      CHECK(std::fabs(ax[i] - p.b[i]) <= 1e-8 * (1.0 + nrm_inf(p.b)));
    for (double v : sol.x) CHECK(v >= -1e-9);
    for (std::size_t bidx : sol.basis) CHECK(sol.reduced_costs[bidx] == 0.0);
    for (double rc : sol.reduced_costs) CHECK(rc >= -1e-9);

    // weak duality through the basis-derived dual
    const Vec y = basis_dual(p, sol);
    CHECK(std::fabs(dot(p.b, y) - sol.objective) <= 1e-7 * (1.0 + std::fabs(sol.objective)));

    // any alternative vertex is itself a vertex at equal objective
    if (sol.has_alternative_optima) {
      auto alt = alternative_vertex(p, sol);
      if (alt) {
        CHECK(std::fabs(dot(p.c, *alt) - sol.objective) <= 1e-9 * (1.0 + std::fabs(sol.objective)));
        bool member = false;
        for (const Vec& v : verts) {
          double d = 0.0;
          for (std::size_t i = 0; i < n; ++i) d = std::max(d, std::fabs(v[i] - (*alt)[i]));
          if (d <= 1e-8) member = true;
        }
        CHECK(member);
      }
    }
  }
  CHECK(solved == 220);
}

TEST_CASE("determinism: identical input gives identical solution bytes") {
  Rng rng(77);
  Mat a(3, 7);
  for (auto& v : a.data) v = rng.normal();
  for (std::size_t j = 0; j < 7; ++j) a(2, j) = 1.0;
  Vec x0(7, 0.0);
  x0[1] = 0.4;
  x0[4] = 1.1;
  LpStandardForm p{3, 7, a, matvec(a, x0), Vec(7, 0.0)};
  for (std::size_t j = 0; j < 7; ++j) p.c[j] = std::cos(double(j));
  auto s1 = solve_lp(p);
  auto s2 = solve_lp(p);
  REQUIRE(s1.status == LpStatus::Optimal);
  CHECK(bitwise_equal(s1.x, s2.x));
  CHECK(s1.basis == s2.basis);
  CHECK(bitwise_equal(s1.reduced_costs, s2.reduced_costs));
}

TEST_CASE("lp json round trip") {
  auto p = make_lp(2, 4, {1, 0, 1, 0, 0, 1, 0, 1}, {1, 1}, {0.5, -1, 0, 2});
  auto q = lp_from_json(lp_to_json(p));
  CHECK(q.m == p.m);
  CHECK(q.n == p.n);
  CHECK(bitwise_equal(q.b, p.b));
  CHECK(bitwise_equal(q.c, p.c));
  CHECK(q.a.data == p.a.data);
  CHECK_THROWS(lp_from_json("{\"m\":1}"));
}
