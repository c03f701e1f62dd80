// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace tcqa {

inline constexpr std::string_view kDefaultIdAttribute = "data-cell-id";

struct Cell {
  std::string cell_id;
  std::string text;
  int anchor_row = 0;
  int anchor_col = 0;
  int row_span = 1;
  int col_span = 1;
  bool is_header = false;

  bool operator==(const Cell&) const = default;
};

/// Normalized occupancy grid. Every position maps to exactly one cell and
/// cells are stored in row-major anchor order. Immutable once built; the
/// only way to obtain one is through a validating factory.
class TableGrid {
 public:
  /// Validates coverage, span closure and ID uniqueness; throws
  /// Error{SpanConflict | EmptyTable | DuplicateCellId | InvalidArgument}.
  static TableGrid from_cells(std::string table_id, int n_rows, int n_cols,
                              std::vector<Cell> cells);

  const std::string& table_id() const noexcept { return table_id_; }
  int n_rows() const noexcept { return n_rows_; }
  int n_cols() const noexcept { return n_cols_; }
  const std::vector<Cell>& cells() const noexcept { return cells_; }

  std::size_t cell_index_at(int row, int col) const {
    return occupancy_[static_cast<std::size_t>(row) * n_cols_ + col];
  }
  const Cell& cell_at(int row, int col) const { return cells_[cell_index_at(row, col)]; }

  /// Throws Error{UnknownCellId}.
  const Cell& cell_by_id(std::string_view cell_id) const;
  const Cell* find_cell(std::string_view cell_id) const noexcept;

  bool operator==(const TableGrid& other) const {
    return table_id_ == other.table_id_ && n_rows_ == other.n_rows_ &&
           n_cols_ == other.n_cols_ && cells_ == other.cells_;
  }

 private:
  TableGrid() = default;

  std::string table_id_;
  int n_rows_ = 0;
  int n_cols_ = 0;
  std::vector<Cell> cells_;
  std::vector<std::size_t> occupancy_;
};

/// Parses a single HTML table into a grid. Honors rowspan/colspan, flattens
/// thead/tbody/tfoot, pads ragged rows with synthetic empty cells and names
/// unannotated cells "r{row}c{col}".
///
/// Throws Error with code MalformedHtml, NestedTable, SpanConflict,
/// EmptyTable or DuplicateCellId.
TableGrid parse_html_table(std::string_view html, std::string table_id,
                           std::string_view id_attribute = kDefaultIdAttribute);

/// Same as TableGrid::cell_by_id.
const Cell& cell_by_id(const TableGrid& grid, std::string_view cell_id);

/// True when the two grids agree on shape, spans, header flags and text,
/// ignoring cell IDs and table IDs.
bool same_structure(const TableGrid& a, const TableGrid& b);

}  // namespace tcqa
