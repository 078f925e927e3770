#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "gfwopt/core.hpp"
#include "gfwopt/rng.hpp"

using namespace gfwopt;

namespace {

Mat mat2(double a, double b, double c, double d) {
  Mat m(2, 2);
  m(0, 0) = a;
  m(0, 1) = b;
  m(1, 0) = c;
  m(1, 1) = d;
  return m;
}

Vec fd_gradient(const Objective& obj, const Vec& x) {
  Vec g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double h = 1e-6 * (1.0 + std::fabs(x[i]));
    Vec xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    g[i] = (obj.eval(xp) - obj.eval(xm)) / (2.0 * h);
  }
  return g;
}

}  // namespace

TEST_CASE("shift_objective closed forms") {
  Objective zero;
  zero.dim = 2;
  zero.alpha = 0.0;
  zero.lipschitz = 0.0;
  zero.eval = [](const Vec&) { return 0.0; };
  zero.grad = [](const Vec& x) { return Vec(x.size(), 0.0); };

  // g == 0, sigma = 1 at (1,1): value 2, gradient (2,2)
  Objective s1 = shift_objective(zero, 1.0);
  Vec x{1.0, 1.0};
  CHECK(s1.eval(x) == doctest::Approx(2.0));
  CHECK(s1.grad(x)[0] == doctest::Approx(2.0));
  CHECK(s1.grad(x)[1] == doctest::Approx(2.0));
  CHECK(s1.alpha == doctest::Approx(1.0));
  CHECK(s1.lipschitz == doctest::Approx(2.0));

  // sigma = 0 keeps values and gradients
  Objective q = quadratic_objective(mat2(0, 1, 1, 0));
  Objective s0 = shift_objective(q, 0.0);
  Vec y{0.3, -0.7};
  CHECK(s0.eval(y) == doctest::Approx(q.eval(y)));
  CHECK(s0.grad(y)[0] == doctest::Approx(q.grad(y)[0]));
  CHECK(s0.grad(y)[1] == doctest::Approx(q.grad(y)[1]));

  // x^T A x with A = [[0,1],[1,0]], sigma = 2 at (1,0): value 2, grad (4,2)
  Objective s2 = shift_objective(q, 2.0);
  Vec z{1.0, 0.0};
  CHECK(s2.eval(z) == doctest::Approx(2.0));
  CHECK(s2.grad(z)[0] == doctest::Approx(4.0));
  CHECK(s2.grad(z)[1] == doctest::Approx(2.0));
}

TEST_CASE("quadratic_objective closed forms") {
  Objective qi = quadratic_objective(mat2(1, 0, 0, 1), 1.0);
  Vec x{3.0, 4.0};
  CHECK(qi.eval(x) == doctest::Approx(25.0));
  CHECK(qi.grad(x)[0] == doctest::Approx(6.0));
  CHECK(qi.grad(x)[1] == doctest::Approx(8.0));
  CHECK(qi.alpha == doctest::Approx(1.0));

  Objective qa = quadratic_objective(mat2(0, 1, 1, 0));
  Vec y{1.0, 1.0};
  CHECK(qa.eval(y) == doctest::Approx(2.0));
  CHECK(qa.grad(y)[0] == doctest::Approx(2.0));
  CHECK(qa.grad(y)[1] == doctest::Approx(2.0));
  CHECK(qa.alpha == 0.0);        // lambda_min unknown
  CHECK(qa.lipschitz == doctest::Approx(2.0));  // Gershgorin row sum 1

  Objective qd = quadratic_objective(mat2(2, 0, 0, 1));
  Vec z{1.0, 2.0};
  CHECK(qd.eval(z) == doctest::Approx(6.0));
  CHECK(qd.grad(z)[0] == doctest::Approx(4.0));
  CHECK(qd.grad(z)[1] == doctest::Approx(4.0));

  Mat bad = mat2(0, 1, 1 + 1e-6, 0);
  CHECK_THROWS_AS(quadratic_objective(bad), NonSymmetricError);
}

TEST_CASE("objective invariants on random quadratics") {
  Rng rng(11);
  for (int rep = 0; rep < 20; ++rep) {
    const std::size_t n = 2 + rng.index(4);
    Mat m(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m(i, j) = rng.normal();
    Mat a(n, n);
    // A = M^T M / n + 0.5 I: symmetric with lambda_min >= 0.5
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k < n; ++k) s += m(k, i) * m(k, j);
        a(i, j) = s / n + (i == j ? 0.5 : 0.0);
      }
    Objective obj = quadratic_objective(a, 0.5);  // valid lower bound on lambda_min
    for (int t = 0; t < 10; ++t) {
      Vec x(n), y(n);
      for (std::size_t i = 0; i < n; ++i) {
        x[i] = rng.normal();
        y[i] = rng.normal();
      }
      // strong-convexity gradient inequality
      const Vec d = sub(y, x);
      CHECK(obj.eval(y) >=
            obj.eval(x) + dot(obj.grad(x), d) + obj.alpha * dot(d, d) - 1e-9);
      // gradient Lipschitz bound
      CHECK(nrm2(sub(obj.grad(x), obj.grad(y))) <= obj.lipschitz * nrm2(d) + 1e-9);
      // finite differences
      const Vec gfd = fd_gradient(obj, x);
      const Vec g = obj.grad(x);
      for (std::size_t i = 0; i < n; ++i)
        CHECK(std::fabs(g[i] - gfd[i]) <= 1e-5 * (1.0 + std::fabs(g[i])));
    }
  }
}

TEST_CASE("shifted indefinite quadratic has exact modulus sigma + lambda_min") {
  Rng rng(21);
  for (int rep = 0; rep < 5; ++rep) {
    const std::size_t n = 3 + rng.index(3);
    Mat a(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) a(i, j) = a(j, i) = rng.normal();
    const double lmin = jacobi_eigenvalues(a).front();
    const double sigma = std::max(0.0, -lmin) + 0.5;
    Objective obj = shift_objective(quadratic_objective(a), sigma);
    obj.alpha = lmin + sigma;  // exact modulus, no clamping
    for (int t = 0; t < 20; ++t) {
      Vec x(n), y(n);
      for (std::size_t i = 0; i < n; ++i) {
        x[i] = rng.normal();
        y[i] = rng.normal();
      }
      const Vec d = sub(y, x);
      CHECK(obj.eval(y) >=
            obj.eval(x) + dot(obj.grad(x), d) + obj.alpha * dot(d, d) - 1e-8);
    }
  }
}

TEST_CASE("shifted objective has identical argmax over sphere samples") {
  Rng rng(5);
  const std::size_t n = 4;
  Mat a(n, n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) a(i, j) = a(j, i) = rng.normal();
  Objective g = quadratic_objective(a);
  Objective gs = shift_objective(g, 1.7);
  std::vector<Vec> sphere;
  for (int t = 0; t < 40; ++t) {
    Vec x(n);
    for (auto& v : x) v = rng.normal();
    const double nr = nrm2(x);
    for (auto& v : x) v /= nr;
    sphere.push_back(x);
  }
  std::size_t arg_plain = 0, arg_shift = 0;
  for (std::size_t i = 1; i < sphere.size(); ++i) {
    if (g.eval(sphere[i]) > g.eval(sphere[arg_plain])) arg_plain = i;
    if (gs.eval(sphere[i]) > gs.eval(sphere[arg_shift])) arg_shift = i;
  }
  CHECK(arg_plain == arg_shift);
}

TEST_CASE("trace serialization") {
  GfwTrace t;
  t.status = TerminationStatus::IterateRepeated;
  t.rows.push_back({0, 1.5, 0.25, 1.0, 0.002});
  t.rows.push_back({1, 2.0, 0.0, 0.0, 0.004});

  const std::string csv = trace_to_csv(t);
  CHECK(csv.substr(0, 36) == "k,objective,fw_gap,step_norm,time_s\n");
  CHECK(csv.find("0,1.5,0.25,1,0.002") != std::string::npos);
  CHECK(csv.find("1,2,0,0,0.004") != std::string::npos);

  const std::string csv0 = trace_to_csv(t, true);
  CHECK(csv0.find("0,1.5,0.25,1,0\n") != std::string::npos);

  const std::string js = trace_to_json(t);
  CHECK(js.find("\"status\": \"IterateRepeated\"") != std::string::npos);
  CHECK(js.find("\"fw_gap\": 0.25") != std::string::npos);

  GfwTrace empty;
  CHECK(trace_to_csv(empty) == "k,objective,fw_gap,step_norm,time_s\n");
}

TEST_CASE("rng determinism and distribution sanity") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
  Rng c(42), d(42);
  for (int i = 0; i < 100; ++i) CHECK(c.normal() == d.normal());
  Rng e(7);
  double mean = 0.0, sq = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double v = e.normal();
    mean += v;
    sq += v * v;
  }
  mean /= n;
  sq /= n;
  CHECK(std::fabs(mean) < 0.05);
  CHECK(std::fabs(sq - 1.0) < 0.05);

  auto idx = Rng(3).sample_indices(10, 4);
  CHECK(idx.size() == 4);
  for (std::size_t i = 1; i < idx.size(); ++i) CHECK(idx[i - 1] < idx[i]);
}

TEST_CASE("jacobi eigenvalues on known spectra") {
  Mat d3(3, 3, 0.0);
  d3(0, 0) = 3;
  d3(1, 1) = 2;
  d3(2, 2) = 1;
  auto ev = jacobi_eigenvalues(d3);
  CHECK(ev[0] == doctest::Approx(1.0));
  CHECK(ev[2] == doctest::Approx(3.0));

  Mat anti(2, 2, 0.0);
  anti(0, 1) = anti(1, 0) = 1.0;
  ev = jacobi_eigenvalues(anti);
  CHECK(ev[0] == doctest::Approx(-1.0));
  CHECK(ev[1] == doctest::Approx(1.0));

  // random symmetric: eigenvalue sum equals trace
  Rng rng(9);
  Mat a(5, 5);
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = i; j < 5; ++j) a(i, j) = a(j, i) = rng.normal();
  ev = jacobi_eigenvalues(a);
  double tr = 0.0, es = 0.0;
  for (std::size_t i = 0; i < 5; ++i) {
    tr += a(i, i);
    es += ev[i];
  }
  CHECK(es == doctest::Approx(tr).epsilon(1e-10));
}
