#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "gfwopt/svg.hpp"

using namespace gfwopt::svg;

TEST_CASE("single series renders one polyline") {
  const std::vector<Series> s = {{"run", {{0, 0}, {1, 1}}}};
  const std::string out = render_svg(s, "x", "y");
  std::size_t count = 0, pos = 0;
  while ((pos = out.find("<polyline", pos)) != std::string::npos) {
    ++count;
    ++pos;
  }
  CHECK(count == 1);
  CHECK(out.find("<svg") == 0);
  CHECK(out.rfind("</svg>\n") == out.size() - 7);
}

TEST_CASE("identical input gives identical bytes") {
  const std::vector<Series> s = {{"a", {{0, 0}, {0.5, 2.25}, {1, 1}}},
                                 {"b", {{0, 1}, {1, 0}}}};
  CHECK(render_svg(s, "iter", "obj") == render_svg(s, "iter", "obj"));
}

TEST_CASE("two series produce two legend entries") {
  const std::vector<Series> s = {{"gfw", {{0, 0}, {1, 1}}}, {"bcm", {{0, 1}, {1, 2}}}};
  const std::string out = render_svg(s, "x", "y");
  CHECK(out.find(">gfw</text>") != std::string::npos);
  CHECK(out.find(">bcm</text>") != std::string::npos);
}

TEST_CASE("empty and short series are rejected") {
  CHECK_THROWS_AS((void)render_svg({}, "x", "y"), EmptySeriesError);
  const std::vector<Series> one_pt = {{"p", {{0, 0}}}};
  CHECK_THROWS_AS((void)render_svg(one_pt, "x", "y"), EmptySeriesError);
}

TEST_CASE("degenerate ranges are padded") {
  const std::vector<Series> flat = {{"f", {{0, 5}, {1, 5}}}};
  const std::string out = render_svg(flat, "x", "y");
  CHECK(out.find("nan") == std::string::npos);
  CHECK(out.find("inf") == std::string::npos);
}
