// SPDX-License-Identifier: Apache-2.0
#include "tcqa/layout_engine.hpp"

#include <algorithm>
#include <charconv>

#include "tcqa/error.hpp"
#include "tcqa/text.hpp"

namespace tcqa {

namespace {

std::string format_number(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string format_number(Px v) { return std::to_string(v); }

void append_xml_escaped(std::string& out, std::string_view s) {
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
}

void check_limit(Px value, const LayoutStyle& style, const char* what) {
  if (value > style.page_limit) {
    throw Error(ErrorCode::OverflowingStyle, std::string(what) + " " + std::to_string(value) +
                                                 " px exceeds page limit " +
                                                 std::to_string(style.page_limit) + " px");
  }
}

}  // namespace

void LayoutStyle::validate() const {
  if (em <= 0 || ascii_advance <= 0 || wide_advance <= 0 || pad <= 0 || border <= 0 || page_limit <= 0) {
    throw Error(ErrorCode::InvalidStyle, "layout style fields must be positive");
  }
  if (ascii_advance > wide_advance || wide_advance > 2 * em) {
    throw Error(ErrorCode::InvalidStyle, "layout style requires ascii_advance <= wide_advance <= 2*em");
  }
}

const BBox* LayoutDocument::cell_box(std::string_view cell_id) const noexcept {
  for (const auto& [id, box] : cell_boxes) {
    if (id == cell_id) return &box;
  }
  return nullptr;
}

Px measure_text(std::string_view text, const LayoutStyle& style) {
  Px width = 0;
  for (char32_t cp : decode_utf8(text)) {
    width += cp < 0x80 ? style.ascii_advance : style.wide_advance;
  }
  return width;
}

GridLines compute_grid_lines(const TableGrid& grid, const LayoutStyle& style) {
  style.validate();
  const auto n_cols = static_cast<std::size_t>(grid.n_cols());
  const Px column_chrome = style.border + 2 * style.pad;

  std::vector<Px> content(n_cols, 0);
  // Spanning cells grouped by the last column they cover.
  std::vector<std::vector<std::pair<int, Px>>> spans_ending(n_cols);
  for (const Cell& cell : grid.cells()) {
    const Px w = measure_text(cell.text, style);
    if (cell.col_span == 1) {
      auto& slot = content[static_cast<std::size_t>(cell.anchor_col)];
      slot = std::max(slot, w);
    } else {
      const auto last = static_cast<std::size_t>(cell.anchor_col + cell.col_span - 1);
      spans_ending[last].emplace_back(cell.anchor_col, cell.col_span * column_chrome + w);
    }
  }

  // Smallest line positions satisfying every width constraint: each line is
  // the longest path from the left edge, so any excess of a spanning cell
  // lands in the last column it covers.
  GridLines lines;
  lines.columns.assign(n_cols + 1, 0);
  for (std::size_t j = 0; j < n_cols; ++j) {
    Px next = lines.columns[j] + column_chrome + content[j];
    for (const auto& [anchor, need] : spans_ending[j]) {
      next = std::max(next, lines.columns[static_cast<std::size_t>(anchor)] + need);
    }
    lines.columns[j + 1] = next;
  }
  const auto n_rows = static_cast<std::size_t>(grid.n_rows());
  lines.rows.assign(n_rows + 1, 0);
  for (std::size_t i = 0; i < n_rows; ++i) {
    lines.rows[i + 1] = lines.rows[i] + style.border + 2 * style.pad + style.em;
  }
  return lines;
}

LayoutDocument compute_layout(const TableGrid& grid, const LayoutStyle& style) {
  const GridLines lines = compute_grid_lines(grid, style);
  LayoutDocument doc;
  doc.table_id = grid.table_id();
  doc.page_width = lines.columns.back() + style.border;
  doc.page_height = lines.rows.back() + style.border;
  check_limit(doc.page_width, style, "page width");
  check_limit(doc.page_height, style, "page height");

  doc.cell_boxes.reserve(grid.cells().size());
  for (const Cell& cell : grid.cells()) {
    const Px left = lines.columns[static_cast<std::size_t>(cell.anchor_col)];
    const Px top = lines.rows[static_cast<std::size_t>(cell.anchor_row)];
    const BBox box{left + style.border, top + style.border,
                   lines.columns[static_cast<std::size_t>(cell.anchor_col + cell.col_span)],
                   lines.rows[static_cast<std::size_t>(cell.anchor_row + cell.row_span)]};
    doc.cell_boxes.emplace_back(cell.cell_id, box);
    if (cell.text.empty()) continue;
    TextSpan span;
    span.text = cell.text;
    span.cell_id = cell.cell_id;
    span.bbox.x1 = left + style.border + style.pad;
    span.bbox.y1 = top + style.border + style.pad;
    span.bbox.x2 = span.bbox.x1 + measure_text(cell.text, style);
    span.bbox.y2 = span.bbox.y1 + style.em;
    doc.spans.push_back(std::move(span));
  }
  return doc;
}

std::string render_svg(const LayoutDocument& doc, const TableGrid& grid, const LayoutStyle& style) {
  std::string out;
  out.reserve(256 + 96 * doc.cell_boxes.size() + 96 * doc.spans.size());
  const auto w = format_number(doc.page_width);
  const auto h = format_number(doc.page_height);
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + w + "\" height=\"" + h +
         "\" viewBox=\"0 0 " + w + " " + h + "\">\n";
  for (std::size_t k = 0; k < doc.cell_boxes.size(); ++k) {
    const BBox& box = doc.cell_boxes[k].second;
    const bool header = k < grid.cells().size() && grid.cells()[k].is_header;
    out += "<rect x=\"" + format_number(box.x1) + "\" y=\"" + format_number(box.y1) + "\" width=\"" +
           format_number(box.width()) + "\" height=\"" + format_number(box.height()) +
           "\" fill=\"" + (header ? "#eeeeee" : "none") + "\" stroke=\"#000000\" stroke-width=\"" +
           format_number(style.border) + "\"/>\n";
  }
  // Baseline sits at 80% of the em box.
  for (const auto& span : doc.spans) {
    const double baseline = static_cast<double>(span.bbox.y1) + 0.8 * static_cast<double>(style.em);
    out += "<text x=\"" + format_number(span.bbox.x1) + "\" y=\"" + format_number(baseline) +
           "\" font-family=\"monospace\" font-size=\"" + format_number(style.em) + "\">";
    append_xml_escaped(out, span.text);
    out += "</text>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace tcqa
