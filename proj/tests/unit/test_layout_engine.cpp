// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <regex>

#include "checks.hpp"
#include "tcqa/error.hpp"
#include "tcqa/layout_engine.hpp"

using namespace tcqa;

namespace {

TableGrid one_by_one(std::string_view text) {
  return parse_html_table("<table><tr><td data-cell-id=\"c1\">" + std::string(text) + "</td></tr></table>", "t1");
}

std::size_t count(const std::string& s, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = s.find(needle); pos != std::string::npos; pos = s.find(needle, pos + 1)) ++n;
  return n;
}

}  // namespace

TEST_CASE("measure_text uses half- and full-width advances") {
  const LayoutStyle style;
  CHECK(measure_text("AB", style) == 16);
  CHECK(measure_text("", style) == 0);
  CHECK(measure_text("当期", style) == 32);
  CHECK(measure_text("3,466円", style) == 5 * 8 + 16);
}

TEST_CASE("1x1 'AB' worked example") {
  const auto doc = compute_layout(one_by_one("AB"));
  CHECK(doc.page_width == 26);
  CHECK(doc.page_height == 26);
  REQUIRE(doc.spans.size() == 1);
  CHECK(doc.spans[0].bbox == BBox{5, 5, 21, 21});
  CHECK(doc.spans[0].cell_id == "c1");
  CHECK(doc.spans[0].text == "AB");
  CHECK(*doc.cell_box("c1") == BBox{1, 1, 25, 25});
}

TEST_CASE("empty 1x1 cell") {
  const auto doc = compute_layout(one_by_one(""));
  CHECK(doc.page_width == 10);
  CHECK(doc.page_height == 26);
  CHECK(doc.spans.empty());
}

TEST_CASE("1x2 second span starts after the first column") {
  const auto g = parse_html_table("<table><tr><td>A</td><td>B</td></tr></table>", "t");
  const auto lines = compute_grid_lines(g, {});
  CHECK(lines.columns[1] == 17);
  const auto doc = compute_layout(g);
  REQUIRE(doc.spans.size() == 2);
  CHECK(doc.spans[1].bbox.x1 == 17 + 1 + 4);
  CHECK(doc.page_width == 35);
}

TEST_CASE("wide spanning cell pushes its last column") {
  // Chrome per column is 1 + 2*4 = 9. Singles give L1 = 17 and L2 = 34; the
  // 80 px spanning cell needs L2 >= 0 + 2*9 + 80 = 98.
  const auto g = parse_html_table(
      "<table><tr><td colspan=2>ABCDEFGHIJ</td></tr><tr><td>a</td><td>b</td></tr></table>", "t");
  const auto lines = compute_grid_lines(g, {});
  CHECK(lines.columns == std::vector<Px>{0, 17, 98});
  const auto doc = compute_layout(g);
  CHECK(doc.page_width == 99);
  CHECK(*doc.cell_box("r0c0") == BBox{1, 1, 98, 25});
  CHECK(doc.spans[0].bbox == BBox{5, 5, 85, 21});
}

TEST_CASE("rowspan cells cover several row bands") {
  const auto g = parse_html_table("<table><tr><td rowspan=2>A</td><td>B</td></tr><tr><td>C</td></tr></table>", "t");
  const auto doc = compute_layout(g);
  CHECK(*doc.cell_box("r0c0") == BBox{1, 1, 17, 50});
  CHECK(doc.page_height == 51);
  CHECK(testing::layout_violation(g, doc, {}).empty());
}

TEST_CASE("overflowing and invalid styles") {
  LayoutStyle tight;
  tight.page_limit = 100;
  const auto wide = one_by_one(std::string(20, 'x'));
  try {
    compute_layout(wide, tight);
    FAIL("expected OverflowingStyle");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::OverflowingStyle);
  }
  LayoutStyle bad;
  bad.ascii_advance = 20;
  CHECK_THROWS_AS(compute_layout(wide, bad), Error);
  bad = {};
  bad.pad = 0;
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = {};
  bad.wide_advance = 40;
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("custom style flows through every rule") {
  LayoutStyle s;
  s.em = 10;
  s.pad = 2;
  s.border = 3;
  s.ascii_advance = 5;
  s.wide_advance = 9;
  const auto doc = compute_layout(one_by_one("a円"), s);
  // L1 = 3 + 2 + 14 + 2 = 21; R1 = 3 + 2 + 10 + 2 = 17.
  CHECK(doc.page_width == 24);
  CHECK(doc.page_height == 20);
  CHECK(doc.spans[0].bbox == BBox{5, 5, 19, 15});
}

TEST_CASE("render_svg draws one rect per cell and one text per span") {
  const auto g = one_by_one("AB");
  const auto doc = compute_layout(g);
  const auto svg = render_svg(doc, g);
  CHECK(count(svg, "<rect ") == 1);
  CHECK(count(svg, "<text ") == 1);
  CHECK(svg.find("<text x=\"5\" y=\"17.8\"") != std::string::npos);
  CHECK(svg.find("width=\"26\" height=\"26\"") != std::string::npos);
  CHECK(svg.find(">AB</text>") != std::string::npos);
  CHECK(render_svg(doc, g) == svg);

  const auto empty = one_by_one("");
  const auto svg_empty = render_svg(compute_layout(empty), empty);
  CHECK(count(svg_empty, "<rect ") == 1);
  CHECK(count(svg_empty, "<text") == 0);
}

TEST_CASE("svg escapes markup in cell text and never prints trailing zeros") {
  const auto g = one_by_one("a&amp;b&lt;c");
  const auto svg = render_svg(compute_layout(g), g);
  CHECK(svg.find(">a&amp;b&lt;c</text>") != std::string::npos);
  CHECK_FALSE(std::regex_search(svg, std::regex(R"( (x|y|width|height|font-size)="\d+\.\d*0")")));
}

TEST_CASE("property: layout invariants over random tilings") {
  testing::Rng rng(77);
  const LayoutStyle style;
  for (int trial = 0; trial < 300; ++trial) {
    const auto tiling = testing::random_tiling(rng);
    const auto g = parse_html_table(testing::tiling_to_html(tiling, rng), "t");
    const auto doc = compute_layout(g, style);
    INFO("trial " << trial);
    REQUIRE(testing::layout_violation(g, doc, style) == "");
    REQUIRE(testing::monotonicity_violation(g, style, rng) == "");
    REQUIRE(compute_layout(g, style) == doc);
  }
}
