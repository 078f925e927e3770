#ifndef GFWOPT_CORE_HPP_
#define GFWOPT_CORE_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gfwopt/linalg.hpp"

namespace gfwopt {

struct InfeasibleStartError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct OracleFailureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NonSymmetricError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct MissingGradientsError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InsufficientDataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ZeroGradientError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct TooLargeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ShapeMismatchError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Differentiable strongly convex function to maximize. alpha is the modulus
// in g(y) >= g(x) + <grad g(x), y-x> + alpha*|y-x|^2 (no 1/2 in this
// convention), lipschitz bounds |grad g(x) - grad g(y)| / |x - y|.
struct Objective {
  std::function<double(const Vec&)> eval;
  std::function<Vec(const Vec&)> grad;
  double alpha = 0.0;
  double lipschitz = 0.0;
  std::size_t dim = 0;
};

// g(x) + sigma*|x|^2; gradient gains 2*sigma*x, alpha gains sigma,
// lipschitz gains 2*sigma.
Objective shift_objective(const Objective& obj, double sigma);

// g(x) = x^T A x for symmetric A. alpha = max(0, lambda_min) when the caller
// knows the smallest eigenvalue, otherwise 0 (caller shifts as needed).
// lipschitz = 2 * Gershgorin row-sum bound.
Objective quadratic_objective(const Mat& a,
                              std::optional<double> known_lambda_min = std::nullopt);

enum class TerminationStatus { StepConverged, GapConverged, IterateRepeated, MaxIter, TimeLimit };

const char* to_string(TerminationStatus s);

struct GfwConfig {
  std::size_t max_iter = 1000;
  // A tolerance of 0 disables the corresponding criterion; exact repetition
  // is always detected separately.
  double tol_step = 0.0;
  double tol_gap = 0.0;
  std::optional<double> wall_time_limit;
  bool record_gradients = false;
  std::uint64_t seed = 0;
};

// Row k holds quantities at iterate x_k; step_norm is |x_{k+1} - x_k| for
// the step taken from x_k.
struct TraceRow {
  std::size_t k = 0;
  double objective = 0.0;
  double fw_gap = 0.0;
  double step_norm = 0.0;
  double time_s = 0.0;
};

struct GfwTrace {
  std::vector<TraceRow> rows;
  std::vector<Vec> gradients;  // one per row when recorded
  TerminationStatus status = TerminationStatus::MaxIter;

  bool has_gradients() const { return gradients.size() == rows.size() && !rows.empty(); }
  std::size_t iterations() const { return rows.size(); }
};

// CSV with header k,objective,fw_gap,step_norm,time_s. zero_times replaces
// wall-clock values with 0 for byte-stable output.
std::string trace_to_csv(const GfwTrace& t, bool zero_times = false);
std::string trace_to_json(const GfwTrace& t, bool zero_times = false);

struct RunResult {
  Vec final_iterate;
  GfwTrace trace;
  TerminationStatus status = TerminationStatus::MaxIter;
};

// Fixed-precision float formatting shared by all writers (%.12g).
std::string fmt_double(double v);

}  // namespace gfwopt

#endif  // GFWOPT_CORE_HPP_
