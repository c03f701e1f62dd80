// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tcqa/table_model.hpp"

namespace tcqa {

using Px = std::int64_t;

/// Fixed-advance font and box model. Half-width advance for ASCII, full-width
/// for everything else.
struct LayoutStyle {
  Px em = 16;
  Px ascii_advance = 8;
  Px wide_advance = 16;
  Px pad = 4;
  Px border = 1;
  // Coordinates beyond this limit are treated as a rendering failure.
  Px page_limit = 20000;

  /// Throws Error{InvalidStyle}.
  void validate() const;

  bool operator==(const LayoutStyle&) const = default;
};

struct BBox {
  Px x1 = 0;
  Px y1 = 0;
  Px x2 = 0;
  Px y2 = 0;

  Px width() const noexcept { return x2 - x1; }
  Px height() const noexcept { return y2 - y1; }
  bool contains(const BBox& o) const noexcept {
    return o.x1 >= x1 && o.y1 >= y1 && o.x2 <= x2 && o.y2 <= y2;
  }
  bool interiors_overlap(const BBox& o) const noexcept {
    return x1 < o.x2 && o.x1 < x2 && y1 < o.y2 && o.y1 < y2;
  }

  bool operator==(const BBox&) const = default;
};

struct TextSpan {
  std::string text;
  BBox bbox;
  std::string cell_id;

  bool operator==(const TextSpan&) const = default;
};

struct LayoutDocument {
  std::string table_id;
  Px page_width = 0;
  Px page_height = 0;
  std::vector<TextSpan> spans;  // row-major reading order
  // Cell boxes in the grid's cell order.
  std::vector<std::pair<std::string, BBox>> cell_boxes;

  const BBox* cell_box(std::string_view cell_id) const noexcept;

  bool operator==(const LayoutDocument&) const = default;
};

/// Vertical and horizontal grid line positions; columns has n_cols + 1
/// entries and rows n_rows + 1. The last line of each is the leading edge of
/// the trailing border.
struct GridLines {
  std::vector<Px> columns;
  std::vector<Px> rows;
};

/// Sum of per-character advances over Unicode scalar values.
Px measure_text(std::string_view text, const LayoutStyle& style);

GridLines compute_grid_lines(const TableGrid& grid, const LayoutStyle& style = {});

/// Places every cell on a collapsed-border grid and emits one span per
/// non-empty cell. Throws Error{OverflowingStyle | InvalidStyle}.
LayoutDocument compute_layout(const TableGrid& grid, const LayoutStyle& style = {});

/// Byte-deterministic SVG 1.1 rendering of the cell boxes and span text.
std::string render_svg(const LayoutDocument& doc, const TableGrid& grid, const LayoutStyle& style = {});

}  // namespace tcqa
