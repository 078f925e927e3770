#include "gfwopt/engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>

namespace gfwopt {

namespace {

constexpr double kZeroGradTol = 1e-14;
constexpr double kGapClamp = -1e-10;

using Clock = std::chrono::steady_clock;

double elapsed_s(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void check_run_inputs(const Objective& obj, const LinearMaxOracle& oracle, const Vec& x0,
                      const GfwConfig& cfg) {
  if (cfg.max_iter < 1) throw std::invalid_argument("GfwConfig: max_iter must be >= 1");
  if (cfg.tol_step < 0.0 || cfg.tol_gap < 0.0)
    throw std::invalid_argument("GfwConfig: tolerances must be >= 0");
  if (obj.dim != oracle.dim())
    throw ShapeMismatchError("run_gfw: objective/oracle dimension mismatch");
  if (x0.size() != obj.dim) throw ShapeMismatchError("run_gfw: x0 dimension mismatch");
  if (!oracle.contains(x0)) throw InfeasibleStartError("run_gfw: x0 not in the feasible set");
}

double clamp_gap(double g) { return (g >= kGapClamp && g < 0.0) ? 0.0 : g; }

// Stall handler: returns the vertex to continue from, or nullopt to stop.
using StallHandler =
    std::function<std::optional<Vec>(const Vec& x, const Vec& grad, double gx)>;

RunResult run_loop(const Objective& obj, const LinearMaxOracle& oracle, const Vec& x0,
                   const GfwConfig& cfg, const StallHandler* on_stall) {
  check_run_inputs(obj, oracle, x0, cfg);
  RunResult res;
  GfwTrace& trace = res.trace;
  Vec x = x0;
  const auto start = Clock::now();
  std::optional<TerminationStatus> status;

  for (std::size_t k = 0; k < cfg.max_iter; ++k) {
    const double gx = obj.eval(x);
    Vec grad = obj.grad(x);
    Vec y = (nrm_inf(grad) < kZeroGradTol) ? x : oracle.solve_from(grad, x);
    const double gap = clamp_gap(dot(grad, sub(y, x)));
    const double step = nrm2(sub(y, x));
    trace.rows.push_back({k, gx, gap, step, elapsed_s(start)});
    if (cfg.record_gradients) trace.gradients.push_back(grad);

    if (bitwise_equal(y, x)) {
      if (on_stall) {
        std::optional<Vec> hop = (*on_stall)(x, grad, gx);
        if (hop) {
          x = std::move(*hop);
          continue;
        }
      }
      status = TerminationStatus::IterateRepeated;
      break;
    }
    x = std::move(y);
    if (cfg.tol_gap > 0.0 && gap <= cfg.tol_gap) {
      status = TerminationStatus::GapConverged;
      break;
    }
    if (cfg.tol_step > 0.0 && step <= cfg.tol_step) {
      status = TerminationStatus::StepConverged;
      break;
    }
    if (cfg.wall_time_limit && elapsed_s(start) > *cfg.wall_time_limit) {
      status = TerminationStatus::TimeLimit;
      break;
    }
  }
  res.status = status.value_or(TerminationStatus::MaxIter);
  trace.status = res.status;
  res.final_iterate = std::move(x);
  return res;
}

}  // namespace

RunResult run_gfw(const Objective& obj, const LinearMaxOracle& oracle, const Vec& x0,
                  const GfwConfig& cfg) {
  return run_loop(obj, oracle, x0, cfg, nullptr);
}

double fw_gap(const Objective& obj, const LinearMaxOracle& oracle, const Vec& x) {
  if (!oracle.contains(x)) throw InfeasibleStartError("fw_gap: x not in the feasible set");
  Vec grad = obj.grad(x);
  if (nrm_inf(grad) < kZeroGradTol) return 0.0;
  const Vec y = oracle.solve_from(grad, x);
  return clamp_gap(dot(grad, sub(y, x)));
}

bool check_stationarity(const Objective& obj, const LinearMaxOracle& oracle, const Vec& x,
                        double tol) {
  return fw_gap(obj, oracle, x) <= tol;
}

DescentConditionReport verify_descent_conditions(const GfwTrace& trace, double alpha,
                                                 double lipschitz) {
  if (!trace.has_gradients() || trace.rows.size() < 2)
    throw MissingGradientsError(
        "verify_descent_conditions: needs >= 2 iterations with recorded gradients");
  DescentConditionReport rep;
  double c1 = std::numeric_limits<double>::infinity();
  double c2 = 0.0;
  bool any_pair = false;
  for (std::size_t k = 0; k + 1 < trace.rows.size(); ++k) {
    const double dg = trace.rows[k + 1].objective - trace.rows[k].objective;
    const double step = trace.rows[k].step_norm;
    c1 = std::min(c1, dg - alpha * step * step);
    any_pair = true;
    if (step >= 1e-14) {
      const double gd = nrm2(sub(trace.gradients[k + 1], trace.gradients[k]));
      c2 = std::max(c2, gd / step);
    }
  }
  rep.c1_margin = any_pair ? c1 : 0.0;
  rep.c2_ratio = c2;
  rep.holds_c1 = rep.c1_margin >= -1e-8;
  rep.holds_c2 = rep.c2_ratio <= lipschitz + 1e-6;
  return rep;
}

const char* to_string(RateRegime r) {
  switch (r) {
    case RateRegime::Finite:
      return "Finite";
    case RateRegime::Linear:
      return "Linear";
    case RateRegime::Sublinear:
      return "Sublinear";
  }
  return "Unknown";
}

namespace {

struct Fit {
  double slope = 0.0;
  double r2 = 0.0;
};

Fit least_squares(const std::vector<double>& xs, const std::vector<double>& ys) {
  const std::size_t n = xs.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  Fit f;
  if (sxx <= 0.0 || syy <= 0.0) {
    f.slope = 0.0;
    f.r2 = 1.0;  // constant data: any line through the mean is exact
    return f;
  }
  f.slope = sxy / sxx;
  f.r2 = (sxy * sxy) / (sxx * syy);
  return f;
}

}  // namespace

RateEstimate estimate_rate_exponent(const GfwTrace& trace, const Vec& distances) {
  if (distances.size() < 10)
    throw InsufficientDataError("estimate_rate_exponent: needs >= 10 iterations");
  RateEstimate est;
  est.tail_fraction = 0.5;
  if (trace.status == TerminationStatus::IterateRepeated) {
    est.regime = RateRegime::Finite;
    est.theta_hat = 0.0;
    est.r_squared = 1.0;
    return est;
  }
  const std::size_t n = distances.size();
  std::vector<double> ks, logk, logd;
  for (std::size_t k = n / 2; k < n; ++k) {
    if (distances[k] <= 0.0) continue;  // converged coordinates drop out
    ks.push_back(static_cast<double>(k));
    logk.push_back(std::log(static_cast<double>(k == 0 ? 1 : k)));
    logd.push_back(std::log(distances[k]));
  }
  if (ks.size() < 3) {  // tail hit the limit exactly
    est.regime = RateRegime::Finite;
    est.theta_hat = 0.0;
    est.r_squared = 1.0;
    return est;
  }
  const Fit lin = least_squares(ks, logd);
  const Fit lgl = least_squares(logk, logd);
  // The literal "linear fit r2 >= 0.98" rule misreads k^-1 tails (log k is
  // nearly affine on [N/2, N], r2 ~ 0.993 regardless of N), so the two
  // candidate fits compete and the better one wins.
  if (lin.r2 >= 0.98 && lin.r2 >= lgl.r2) {
    est.regime = RateRegime::Linear;
    est.theta_hat = 0.5;
    est.r_squared = lin.r2;
    return est;
  }
  est.regime = RateRegime::Sublinear;
  est.r_squared = lgl.r2;
  const double s = lgl.slope;
  if (s >= -1e-9) {
    est.theta_hat = 1.0 - 1e-9;  // non-decaying tail: degenerate end of the range
  } else {
    // slope = -(1-theta)/(2*theta-1)  =>  theta = (slope-1)/(2*slope-1)
    double theta = (s - 1.0) / (2.0 * s - 1.0);
    est.theta_hat = std::clamp(theta, 0.5 + 1e-12, 1.0 - 1e-12);
  }
  return est;
}

RunResult run_gfw_strict(const Objective& obj, const LpBackedOracle& oracle, const Vec& x0,
                         const GfwConfig& cfg) {
  if (obj.alpha <= 0.0)
    throw std::invalid_argument("run_gfw_strict: objective must be strongly convex (alpha > 0)");
  std::vector<Vec> visited;
  auto seen = [&visited](const Vec& v) {
    for (const Vec& w : visited) {
      double d = 0.0;
      for (std::size_t i = 0; i < v.size(); ++i) d = std::max(d, std::fabs(v[i] - w[i]));
      if (d <= 1e-9) return true;
    }
    return false;
  };
  StallHandler handler = [&](const Vec& x, const Vec& grad, double gx) -> std::optional<Vec> {
    visited.push_back(x);
    std::optional<Vec> best;
    double best_val = gx - 1e-12;  // alternatives must not lose objective
    for (Vec& cand : oracle.alternative_outputs(grad)) {
      double d = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) d = std::max(d, std::fabs(cand[i] - x[i]));
      if (d <= 1e-9 || seen(cand)) continue;
      const double val = obj.eval(cand);
      if (val > best_val ||
          (best && val == best_val && std::lexicographical_compare(cand.begin(), cand.end(),
                                                                   best->begin(), best->end()))) {
        best_val = val;
        best = std::move(cand);
      }
    }
    return best;
  };
  return run_loop(obj, oracle, x0, cfg, &handler);
}

}  // namespace gfwopt
