#include "gfwopt/core.hpp"

#include <cmath>
#include <cstdio>

#include "json.hpp"

namespace gfwopt {

Objective shift_objective(const Objective& obj, double sigma) {
  if (sigma < 0.0) throw std::invalid_argument("shift_objective: sigma must be >= 0");
  Objective out;
  out.dim = obj.dim;
  out.alpha = obj.alpha + sigma;
  out.lipschitz = obj.lipschitz + 2.0 * sigma;
  auto eval = obj.eval;
  auto grad = obj.grad;
  out.eval = [eval, sigma](const Vec& x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return eval(x) + sigma * s;
  };
  out.grad = [grad, sigma](const Vec& x) {
    Vec g = grad(x);
    for (std::size_t i = 0; i < x.size(); ++i) g[i] += 2.0 * sigma * x[i];
    return g;
  };
  return out;
}

Objective quadratic_objective(const Mat& a, std::optional<double> known_lambda_min) {
  if (a.rows != a.cols) throw NonSymmetricError("quadratic_objective: matrix not square");
  if (max_asymmetry(a) > 1e-12)
    throw NonSymmetricError("quadratic_objective: asymmetry exceeds 1e-12");
  Objective out;
  out.dim = a.rows;
  out.alpha = known_lambda_min ? std::max(0.0, *known_lambda_min) : 0.0;
  out.lipschitz = 2.0 * gershgorin_bound(a);
  out.eval = [a](const Vec& x) { return dot(x, matvec(a, x)); };
  out.grad = [a](const Vec& x) {
    Vec g = matvec(a, x);
    for (double& v : g) v *= 2.0;
    return g;
  };
  return out;
}

const char* to_string(TerminationStatus s) {
  switch (s) {
    case TerminationStatus::StepConverged:
      return "StepConverged";
    case TerminationStatus::GapConverged:
      return "GapConverged";
    case TerminationStatus::IterateRepeated:
      return "IterateRepeated";
    case TerminationStatus::MaxIter:
      return "MaxIter";
    case TerminationStatus::TimeLimit:
      return "TimeLimit";
  }
  return "Unknown";
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string trace_to_csv(const GfwTrace& t, bool zero_times) {
  std::string s = "k,objective,fw_gap,step_norm,time_s\n";
  for (const TraceRow& r : t.rows) {
    s += std::to_string(r.k);
    s += ',';
    s += fmt_double(r.objective);
    s += ',';
    s += fmt_double(r.fw_gap);
    s += ',';
    s += fmt_double(r.step_norm);
    s += ',';
    s += fmt_double(zero_times ? 0.0 : r.time_s);
    s += '\n';
  }
  return s;
}

std::string trace_to_json(const GfwTrace& t, bool zero_times) {
  nlohmann::json j;
  j["status"] = to_string(t.status);
  nlohmann::json rows = nlohmann::json::array();
  for (const TraceRow& r : t.rows) {
    rows.push_back({{"k", r.k},
                    {"objective", r.objective},
                    {"fw_gap", r.fw_gap},
                    {"step_norm", r.step_norm},
                    {"time_s", zero_times ? 0.0 : r.time_s}});
  }
  j["iterations"] = rows;
  return j.dump(2) + "\n";
}

}  // namespace gfwopt
