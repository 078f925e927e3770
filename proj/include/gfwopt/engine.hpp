#ifndef GFWOPT_ENGINE_HPP_
#define GFWOPT_ENGINE_HPP_

#include "gfwopt/core.hpp"
#include "gfwopt/oracles.hpp"

namespace gfwopt {

// Unit-step conditional gradient loop: x_{k+1} = argmax{<grad g(x_k), x> : x in X}.
// Stopping, strongest certificate first: exact (bitwise) iterate repetition,
// then gap <= tol_gap, step <= tol_step, wall time, max_iter. A tolerance of
// zero disables its criterion. Zero gradients (inf-norm < 1e-14) repeat the
// current iterate instead of querying the oracle.
RunResult run_gfw(const Objective& obj, const LinearMaxOracle& oracle, const Vec& x0,
                  const GfwConfig& cfg);

// gamma(x) = <grad g(x), solve(grad g(x)) - x>, clamped to 0 from [-1e-10, 0).
double fw_gap(const Objective& obj, const LinearMaxOracle& oracle, const Vec& x);

bool check_stationarity(const Objective& obj, const LinearMaxOracle& oracle, const Vec& x,
                        double tol);

struct DescentConditionReport {
  double c1_margin = 0.0;  // min_k [g(x_{k+1}) - g(x_k) - alpha*|dx|^2]
  double c2_ratio = 0.0;   // max_k |grad_{k+1} - grad_k| / |dx|, steps >= 1e-14
  bool holds_c1 = false;   // c1_margin >= -1e-8
  bool holds_c2 = false;   // c2_ratio <= lipschitz + 1e-6
};

DescentConditionReport verify_descent_conditions(const GfwTrace& trace, double alpha,
                                                 double lipschitz);

enum class RateRegime { Finite, Linear, Sublinear };

const char* to_string(RateRegime r);

struct RateEstimate {
  double theta_hat = 0.0;
  RateRegime regime = RateRegime::Finite;
  double r_squared = 1.0;
  double tail_fraction = 0.5;
};

// Classifies the tail decay of |x_k - x_final|. Exact repetition is the
// finite regime; otherwise the better of a log-linear and a log-log fit on
// the last half decides between the linear and sublinear regimes, with the
// sublinear exponent recovered from slope = -(1-theta)/(2*theta-1).
RateEstimate estimate_rate_exponent(const GfwTrace& trace, const Vec& distances);

// GFW over an LP-backed polytope with the stall escape: on exact repetition,
// hop to the best alternative optimal vertex of the gradient LP not yet
// visited; terminate once the stalled vertex has no alternative optimum,
// which certifies strict stationarity.
RunResult run_gfw_strict(const Objective& obj, const LpBackedOracle& oracle, const Vec& x0,
                         const GfwConfig& cfg);

}  // namespace gfwopt

#endif  // GFWOPT_ENGINE_HPP_
