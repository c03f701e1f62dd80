// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "generators.hpp"
#include "tcqa/error.hpp"
#include "tcqa/table_model.hpp"

using namespace tcqa;

namespace {

ErrorCode parse_error(std::string_view html) {
  try {
    parse_html_table(html, "t");
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected a parse error");
  return ErrorCode::Io;
}

}  // namespace

TEST_CASE("minimal table") {
  const auto g = parse_html_table(R"(<table><tr><td data-cell-id="c1">A</td></tr></table>)", "t1");
  REQUIRE(g.n_rows() == 1);
  REQUIRE(g.n_cols() == 1);
  REQUIRE(g.cells().size() == 1);
  const Cell& c = g.cells()[0];
  CHECK(c.cell_id == "c1");
  CHECK(c.text == "A");
  CHECK(c.anchor_row == 0);
  CHECK(c.anchor_col == 0);
  CHECK(c.row_span == 1);
  CHECK(c.col_span == 1);
  CHECK_FALSE(c.is_header);
  CHECK(g.table_id() == "t1");
}

TEST_CASE("colspan expands into occupancy") {
  const auto g = parse_html_table(R"(<table><tr><td colspan="2">H</td></tr><tr><td>a</td><td>b</td></tr></table>)", "t");
  REQUIRE(g.n_rows() == 2);
  REQUIRE(g.n_cols() == 2);
  CHECK(g.cell_at(0, 0).text == "H");
  CHECK(g.cell_at(0, 1).text == "H");
  CHECK(g.cell_index_at(0, 0) == g.cell_index_at(0, 1));
  CHECK(g.cell_at(1, 0).text == "a");
  CHECK(g.cell_at(1, 1).text == "b");
}

TEST_CASE("cell_by_id resolves explicit and synthetic ids") {
  const auto one = parse_html_table(R"(<table><tr><td data-cell-id="c1">A</td></tr></table>)", "t1");
  CHECK(cell_by_id(one, "c1").text == "A");
  const auto two = parse_html_table(R"(<table><tr><td colspan="2">H</td></tr><tr><td>a</td><td>b</td></tr></table>)", "t");
  CHECK(cell_by_id(two, "r1c0").text == "a");
  CHECK(cell_by_id(two, "r0c0").text == "H");
  try {
    cell_by_id(two, "zzz");
    FAIL("expected UnknownCellId");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnknownCellId);
  }
}

TEST_CASE("error cases") {
  CHECK(parse_error("<table><tr><td><table><tr><td>x</td></tr></table></td></tr></table>") == ErrorCode::NestedTable);
  CHECK(parse_error("<table></table>") == ErrorCode::EmptyTable);
  CHECK(parse_error("<table><tr></tr></table>") == ErrorCode::EmptyTable);
  CHECK(parse_error("<p>no table here</p>") == ErrorCode::MalformedHtml);
  CHECK(parse_error("<table><tr><td>x</td></tr>") == ErrorCode::MalformedHtml);
  CHECK(parse_error("<table><tr><td class=\"x>y</td></tr></table>") == ErrorCode::MalformedHtml);
  CHECK(parse_error("<table><tr><td>a</td></tr></table><table><tr><td>b</td></tr></table>") ==
        ErrorCode::MalformedHtml);
  CHECK(parse_error("<table><!-- unterminated <tr><td>a</td></tr></table>") == ErrorCode::MalformedHtml);
  // Row 1's colspan runs into the rowspan coming down from row 0.
  CHECK(parse_error("<table><tr><td>a</td><td rowspan=2>b</td></tr><tr><td colspan=2>c</td></tr></table>") ==
        ErrorCode::SpanConflict);
  CHECK(parse_error(R"(<table><tr><td data-cell-id="x">a</td><td data-cell-id="x">b</td></tr></table>)") ==
        ErrorCode::DuplicateCellId);
}

TEST_CASE("ragged rows are padded on the right") {
  const auto g = parse_html_table("<table><tr><td>a</td><td>b</td><td>c</td></tr><tr><td>d</td></tr></table>", "t");
  REQUIRE(g.n_cols() == 3);
  CHECK(g.cell_at(1, 1).text.empty());
  CHECK(g.cell_at(1, 1).cell_id == "r1c1");
  CHECK(g.cell_at(1, 2).cell_id == "r1c2");
  CHECK(g.cell_at(1, 2).col_span == 1);
  CHECK(g.cells().size() == 6);
}

TEST_CASE("whitespace is collapsed and entities decoded") {
  const auto g = parse_html_table(
      "<table><tr><td>  3,466\n\t 百万円 </td><td>A &amp; B&nbsp;&lt;x&gt; &#x5186;&#20870;</td>"
      "<td>line<br>break</td><td><b>bold</b> <i>it</i></td></tr></table>",
      "t");
  CHECK(g.cells()[0].text == "3,466 百万円");
  CHECK(g.cells()[1].text == "A & B <x> 円円");
  CHECK(g.cells()[2].text == "line break");
  CHECK(g.cells()[3].text == "bold it");
}

TEST_CASE("row groups flatten, th marks headers, tag case is ignored") {
  const auto g = parse_html_table(
      "<TABLE><THEAD><TR><TH>h1</TH><TH>h2</TH></TR></THEAD>"
      "<tbody><tr><td>a<td>b</tbody><tfoot><tr><td>f1<td>f2</tfoot></table>",
      "t");
  REQUIRE(g.n_rows() == 3);
  CHECK(g.cell_at(0, 0).is_header);
  CHECK(g.cell_at(0, 1).is_header);
  CHECK_FALSE(g.cell_at(1, 0).is_header);
  CHECK(g.cell_at(1, 1).text == "b");
  CHECK(g.cell_at(2, 1).text == "f2");
}

TEST_CASE("custom id attribute and synthetic-id collisions") {
  const auto g = parse_html_table(R"(<table><tr><td id="r0c1">a</td><td>b</td></tr></table>)", "t", "id");
  // The explicit "r0c1" sits at (0,0), so the synthetic name of (0,1) is suffixed.
  CHECK(g.cell_at(0, 0).cell_id == "r0c1");
  CHECK(g.cell_at(0, 1).cell_id == "r0c1_1");
  const auto h = parse_html_table(R"(<table><tr><td data-cell-id="c1">a</td></tr></table>)", "t", "id");
  CHECK(h.cells()[0].cell_id == "r0c0");
}

TEST_CASE("rowspan past the last row is clamped, rowspan=0 spans to the end") {
  const auto g = parse_html_table("<table><tr><td rowspan=5>a</td><td>b</td></tr><tr><td>c</td></tr></table>", "t");
  CHECK(g.n_rows() == 2);
  CHECK(g.cell_at(1, 0).text == "a");
  CHECK(g.cells()[0].row_span == 2);
  const auto z = parse_html_table("<table><tr><td rowspan=0>a</td><td>b</td></tr><tr><td>c</td></tr>"
                                  "<tr><td>d</td></tr></table>",
                                  "t");
  CHECK(z.cells()[0].row_span == 3);
  const auto bad = parse_html_table("<table><tr><td colspan=0 rowspan=-2>a</td><td colspan=x>b</td></tr></table>", "t");
  CHECK(bad.cells()[0].col_span == 1);
  CHECK(bad.cells()[0].row_span == 1);
  CHECK(bad.cells()[1].col_span == 1);
}

TEST_CASE("from_cells rejects invalid grids") {
  auto cell = [](std::string id, int r, int c, int rs = 1, int cs = 1) {
    Cell x;
    x.cell_id = std::move(id);
    x.anchor_row = r;
    x.anchor_col = c;
    x.row_span = rs;
    x.col_span = cs;
    return x;
  };
  CHECK_THROWS_AS(TableGrid::from_cells("t", 1, 2, {cell("a", 0, 0)}), Error);
  CHECK_THROWS_AS(TableGrid::from_cells("t", 1, 1, {cell("a", 0, 0), cell("b", 0, 0)}), Error);
  CHECK_THROWS_AS(TableGrid::from_cells("t", 1, 1, {cell("a", 0, 0, 1, 2)}), Error);
  CHECK_THROWS_AS(TableGrid::from_cells("t", 0, 1, {}), Error);
  CHECK_NOTHROW(TableGrid::from_cells("t", 1, 2, {cell("b", 0, 1), cell("a", 0, 0)}));
}

TEST_CASE("property: random tilings parse to the oracle occupancy") {
  testing::Rng rng(20240611);
  for (int trial = 0; trial < 300; ++trial) {
    const auto tiling = testing::random_tiling(rng);
    const auto html = testing::tiling_to_html(tiling, rng);
    const auto g = parse_html_table(html, "t");
    REQUIRE(g.n_rows() == tiling.n_rows);
    REQUIRE(g.n_cols() == tiling.n_cols);
    REQUIRE(g.cells().size() == tiling.cells.size());
    const auto owners = tiling.owners();
    for (int r = 0; r < g.n_rows(); ++r) {
      for (int c = 0; c < g.n_cols(); ++c) {
        const auto& expected = tiling.cells[static_cast<std::size_t>(owners[r][c])];
        const Cell& got = g.cell_at(r, c);
        REQUIRE(got.anchor_row == expected.row);
        REQUIRE(got.anchor_col == expected.col);
        REQUIRE(got.row_span == expected.row_span);
        REQUIRE(got.col_span == expected.col_span);
        REQUIRE(got.text == expected.text);
        REQUIRE(got.is_header == expected.is_header);
        if (expected.id) REQUIRE(got.cell_id == *expected.id);
      }
    }
    // Determinism.
    REQUIRE(parse_html_table(html, "t") == g);
  }
}
