#ifndef GFWOPT_SVG_HPP_
#define GFWOPT_SVG_HPP_

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gfwopt::svg {

struct EmptySeriesError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Series {
  std::string name;
  std::vector<std::pair<double, double>> points;
};

// Self-contained line plot with linear auto-ranged axes and a legend.
// Byte output is a pure function of the input.
std::string render_svg(const std::vector<Series>& series, const std::string& x_label,
                       const std::string& y_label);

}  // namespace gfwopt::svg

#endif  // GFWOPT_SVG_HPP_
