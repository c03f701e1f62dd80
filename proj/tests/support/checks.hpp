// SPDX-License-Identifier: Apache-2.0
//
// Invariant checkers shared by the unit and acceptance suites. Each returns
// an empty string when the invariant holds, otherwise a description of the
// first violation.
#pragma once

#include <set>
#include <string>

#include "generators.hpp"
#include "tcqa/layout_engine.hpp"
#include "tcqa/table_model.hpp"

namespace tcqa::testing {

/// Full coverage and span closure, checked by walking the grid.
inline std::string grid_violation(const TableGrid& g) {
  std::vector<int> visits(g.cells().size(), 0);
  for (int r = 0; r < g.n_rows(); ++r) {
    for (int c = 0; c < g.n_cols(); ++c) {
      const auto k = g.cell_index_at(r, c);
      if (k >= g.cells().size()) return "unassigned position";
      const Cell& cell = g.cells()[k];
      if (r < cell.anchor_row || r >= cell.anchor_row + cell.row_span || c < cell.anchor_col ||
          c >= cell.anchor_col + cell.col_span) {
        return "position outside its cell's span";
      }
      ++visits[k];
    }
  }
  std::set<std::string> ids;
  for (std::size_t k = 0; k < g.cells().size(); ++k) {
    const Cell& cell = g.cells()[k];
    if (cell.row_span < 1 || cell.col_span < 1) return "span below 1";
    if (visits[k] != cell.row_span * cell.col_span) return "span rectangle not closed for " + cell.cell_id;
    if (!ids.insert(cell.cell_id).second) return "duplicate id " + cell.cell_id;
  }
  return {};
}

/// Containment, non-overlap, minimum column width and the bbox-center
/// round trip back to the owning cell.
inline std::string layout_violation(const TableGrid& g, const LayoutDocument& doc, const LayoutStyle& style) {
  const auto lines = compute_grid_lines(g, style);
  for (std::size_t j = 0; j + 1 < lines.columns.size(); ++j) {
    if (lines.columns[j + 1] - lines.columns[j] < style.border + 2 * style.pad) return "column narrower than chrome";
  }
  if (doc.cell_boxes.size() != g.cells().size()) return "cell box count";
  for (std::size_t a = 0; a < doc.cell_boxes.size(); ++a) {
    const BBox& box = doc.cell_boxes[a].second;
    if (box.x1 < 0 || box.y1 < 0 || box.x2 > doc.page_width || box.y2 > doc.page_height) return "cell box off page";
    for (std::size_t b = a + 1; b < doc.cell_boxes.size(); ++b) {
      if (box.interiors_overlap(doc.cell_boxes[b].second)) return "overlapping cell boxes";
    }
  }
  std::size_t non_empty = 0;
  for (const auto& cell : g.cells()) non_empty += cell.text.empty() ? 0 : 1;
  if (doc.spans.size() != non_empty) return "span count differs from non-empty cells";
  std::pair<int, int> previous{-1, -1};
  for (const auto& span : doc.spans) {
    const Cell* cell = g.find_cell(span.cell_id);
    const BBox* box = doc.cell_box(span.cell_id);
    if (!cell || !box) return "span without cell";
    if (span.text != cell->text || span.text.empty()) return "span text mismatch";
    const std::pair<int, int> anchor{cell->anchor_row, cell->anchor_col};
    if (!(previous < anchor)) return "spans not in row-major order";
    previous = anchor;
    const BBox inset{box->x1 + style.pad, box->y1 + style.pad, box->x2, box->y2};
    if (!inset.contains(span.bbox) || span.bbox.width() <= 0 || span.bbox.height() <= 0) {
      return "span not contained in its cell box";
    }
    // Center round trip through the grid lines; doubled coordinates keep it
    // integral.
    const Px cx2 = span.bbox.x1 + span.bbox.x2;
    const Px cy2 = span.bbox.y1 + span.bbox.y2;
    int col = -1;
    int row = -1;
    for (std::size_t j = 0; j + 1 < lines.columns.size(); ++j) {
      if (2 * lines.columns[j] <= cx2 && cx2 < 2 * lines.columns[j + 1]) col = static_cast<int>(j);
    }
    for (std::size_t i = 0; i + 1 < lines.rows.size(); ++i) {
      if (2 * lines.rows[i] <= cy2 && cy2 < 2 * lines.rows[i + 1]) row = static_cast<int>(i);
    }
    if (row < 0 || col < 0) return "span center off grid";
    if (g.cell_at(row, col).cell_id != span.cell_id) return "center round trip lands on another cell";
  }
  return {};
}

/// Lengthens one cell's text and checks no grid line moves left.
inline std::string monotonicity_violation(const TableGrid& g, const LayoutStyle& style, Rng& rng) {
  const auto before = compute_grid_lines(g, style);
  auto cells = g.cells();
  auto& victim = cells[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(cells.size()) - 1))];
  victim.text += coin(rng, 0.5) ? "W" : "円";
  const auto grown = TableGrid::from_cells(g.table_id(), g.n_rows(), g.n_cols(), std::move(cells));
  const auto after = compute_grid_lines(grown, style);
  for (std::size_t j = 0; j < before.columns.size(); ++j) {
    if (after.columns[j] < before.columns[j]) return "column line moved left after growing a cell";
  }
  return {};
}

}  // namespace tcqa::testing
