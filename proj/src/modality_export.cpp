// SPDX-License-Identifier: Apache-2.0
#include "tcqa/modality_export.hpp"

#include <json.hpp>

#include "tcqa/error.hpp"

namespace tcqa {

namespace {

using ojson = nlohmann::ordered_json;

void append_html_escaped(std::string& out, std::string_view s) {
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out.push_back(c);
    }
  }
}

void append_markdown_escaped(std::string& out, std::string_view s) {
  for (char c : s) {
    switch (c) {
      case '|': out += "\\|"; break;
      case '\\': out += "\\\\"; break;
      case '\n':
      case '\r': out.push_back(' '); break;
      default: out.push_back(c);
    }
  }
}

[[noreturn]] void schema_error(const std::string& what) {
  throw Error(ErrorCode::SchemaViolation, what);
}

std::string dump(const ojson& j) {
  return j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

ojson parse_json(std::string_view text, const char* what) {
  try {
    return ojson::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    schema_error(std::string(what) + ": " + e.what());
  }
}

template <typename T>
T field(const ojson& obj, const char* key, const char* what) {
  if (!obj.is_object() || !obj.contains(key)) schema_error(std::string(what) + ": missing field '" + key + "'");
  try {
    return obj.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    schema_error(std::string(what) + ": field '" + key + "' has the wrong type");
  }
}

ojson bbox_json(const BBox& b) { return ojson::array({b.x1, b.y1, b.x2, b.y2}); }

BBox bbox_from(const ojson& j, const char* what) {
  if (!j.is_array() || j.size() != 4) schema_error(std::string(what) + ": bbox must have 4 numbers");
  for (const auto& v : j) {
    if (!v.is_number_integer()) schema_error(std::string(what) + ": bbox coordinates must be integers");
  }
  BBox b{j[0].get<Px>(), j[1].get<Px>(), j[2].get<Px>(), j[3].get<Px>()};
  if (b.x2 <= b.x1 || b.y2 <= b.y1) schema_error(std::string(what) + ": degenerate bbox");
  return b;
}

// Splits one pipe-table line into unescaped cell texts.
std::vector<std::string> split_markdown_row(std::string_view line, std::size_t line_no) {
  while (!line.empty() && (line.back() == ' ' || line.back() == '\t')) line.remove_suffix(1);
  while (!line.empty() && (line.front() == ' ' || line.front() == '\t')) line.remove_prefix(1);
  if (line.size() < 2 || line.front() != '|' || line.back() != '|') {
    schema_error("markdown line " + std::to_string(line_no) + ": expected a pipe-delimited row");
  }
  std::vector<std::string> cells;
  std::string current;
  for (std::size_t i = 1; i < line.size(); ++i) {
    const char c = line[i];
    if (c == '\\' && i + 1 < line.size() && (line[i + 1] == '|' || line[i + 1] == '\\')) {
      current.push_back(line[++i]);
    } else if (c == '|') {
      const auto first = current.find_first_not_of(' ');
      const auto last = current.find_last_not_of(' ');
      cells.push_back(first == std::string::npos ? std::string{} : current.substr(first, last - first + 1));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  return cells;
}

bool is_separator(const std::vector<std::string>& cells) {
  for (const auto& c : cells) {
    if (c.empty()) return false;
    std::size_t i = 0;
    if (c[i] == ':') ++i;
    std::size_t dashes = 0;
    while (i < c.size() && c[i] == '-') ++i, ++dashes;
    if (i < c.size() && c[i] == ':') ++i;
    if (dashes == 0 || i != c.size()) return false;
  }
  return true;
}

}  // namespace

std::string_view format_name(ExportFormat format) noexcept {
  switch (format) {
    case ExportFormat::CleanHtml: return "clean-html";
    case ExportFormat::Markdown: return "markdown";
    case ExportFormat::Json: return "json";
    case ExportFormat::Layout: return "layout";
    case ExportFormat::Svg: return "svg";
  }
  return "";
}

std::optional<ExportFormat> parse_format_name(std::string_view name) noexcept {
  for (auto f : kAllExportFormats) {
    if (format_name(f) == name) return f;
  }
  return std::nullopt;
}

std::string export_file_name(std::string_view table_id, ExportFormat format) {
  std::string name(table_id);
  switch (format) {
    case ExportFormat::CleanHtml: return name + ".clean.html";
    case ExportFormat::Markdown: return name + ".md";
    case ExportFormat::Json: return name + ".table.json";
    case ExportFormat::Layout: return name + ".layout.json";
    case ExportFormat::Svg: return name + ".svg";
  }
  return name;
}

std::string to_clean_html(const TableGrid& grid) {
  std::string out = "<table>\n";
  auto it = grid.cells().begin();
  for (int r = 0; r < grid.n_rows(); ++r) {
    out += "<tr>";
    for (; it != grid.cells().end() && it->anchor_row == r; ++it) {
      const char* tag = it->is_header ? "th" : "td";
      out += '<';
      out += tag;
      if (it->row_span > 1) out += " rowspan=\"" + std::to_string(it->row_span) + "\"";
      if (it->col_span > 1) out += " colspan=\"" + std::to_string(it->col_span) + "\"";
      out += '>';
      append_html_escaped(out, it->text);
      out += "</";
      out += tag;
      out += '>';
    }
    out += "</tr>\n";
  }
  out += "</table>\n";
  return out;
}

std::string to_markdown(const TableGrid& grid) {
  std::string out;
  for (int r = 0; r < grid.n_rows(); ++r) {
    out += '|';
    for (int c = 0; c < grid.n_cols(); ++c) {
      out += ' ';
      append_markdown_escaped(out, grid.cell_at(r, c).text);
      out += " |";
    }
    out += '\n';
    if (r == 0) {
      out += '|';
      for (int c = 0; c < grid.n_cols(); ++c) out += " --- |";
      out += '\n';
    }
  }
  return out;
}

TableGrid parse_markdown_table(std::string_view markdown, std::string table_id) {
  std::vector<std::vector<std::string>> rows;
  std::size_t line_no = 0;
  std::size_t start = 0;
  bool seen_separator = false;
  while (start < markdown.size()) {
    auto end = markdown.find('\n', start);
    if (end == std::string_view::npos) end = markdown.size();
    auto line = markdown.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    start = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
    auto cells = split_markdown_row(line, line_no);
    if (rows.size() == 1 && !seen_separator) {
      if (!is_separator(cells)) schema_error("markdown line " + std::to_string(line_no) + ": expected separator row");
      if (cells.size() != rows[0].size()) schema_error("markdown separator width differs from header");
      seen_separator = true;
      continue;
    }
    if (!rows.empty() && cells.size() != rows[0].size()) {
      schema_error("markdown line " + std::to_string(line_no) + ": row width differs from header");
    }
    rows.push_back(std::move(cells));
  }
  if (rows.empty() || rows[0].empty()) throw Error(ErrorCode::EmptyTable, "markdown table has no rows");
  std::vector<Cell> cells;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows[r].size(); ++c) {
      Cell cell;
      cell.cell_id = "r" + std::to_string(r) + "c" + std::to_string(c);
      cell.text = std::move(rows[r][c]);
      cell.anchor_row = static_cast<int>(r);
      cell.anchor_col = static_cast<int>(c);
      cell.is_header = r == 0;
      cells.push_back(std::move(cell));
    }
  }
  const auto n_cols = static_cast<int>(rows[0].size());
  return TableGrid::from_cells(std::move(table_id), static_cast<int>(rows.size()), n_cols, std::move(cells));
}

std::string to_json_table(const TableGrid& grid) {
  ojson cells = ojson::array();
  for (const Cell& c : grid.cells()) {
    cells.push_back(ojson{{"cell_id", c.cell_id},   {"row", c.anchor_row},
                          {"col", c.anchor_col},    {"row_span", c.row_span},
                          {"col_span", c.col_span}, {"is_header", c.is_header},
                          {"text", c.text}});
  }
  ojson j{{"table_id", grid.table_id()},
          {"n_rows", grid.n_rows()},
          {"n_cols", grid.n_cols()},
          {"cells", std::move(cells)}};
  return dump(j);
}

TableGrid parse_json_table(std::string_view json) {
  constexpr const char* what = "table json";
  const ojson j = parse_json(json, what);
  const auto& cells_json = j.contains("cells") ? j.at("cells") : ojson();
  if (!cells_json.is_array()) schema_error("table json: 'cells' must be an array");
  std::vector<Cell> cells;
  cells.reserve(cells_json.size());
  for (const auto& cj : cells_json) {
    Cell c;
    c.cell_id = field<std::string>(cj, "cell_id", what);
    c.anchor_row = field<int>(cj, "row", what);
    c.anchor_col = field<int>(cj, "col", what);
    c.row_span = field<int>(cj, "row_span", what);
    c.col_span = field<int>(cj, "col_span", what);
    c.is_header = field<bool>(cj, "is_header", what);
    c.text = field<std::string>(cj, "text", what);
    cells.push_back(std::move(c));
  }
  return TableGrid::from_cells(field<std::string>(j, "table_id", what), field<int>(j, "n_rows", what),
                               field<int>(j, "n_cols", what), std::move(cells));
}

std::string to_layout_records(const LayoutDocument& doc) {
  ojson spans = ojson::array();
  for (const auto& s : doc.spans) {
    spans.push_back(ojson{{"text", s.text}, {"bbox", bbox_json(s.bbox)}, {"cell_id", s.cell_id}});
  }
  ojson boxes = ojson::array();
  for (const auto& [id, box] : doc.cell_boxes) {
    boxes.push_back(ojson{{"cell_id", id}, {"bbox", bbox_json(box)}});
  }
  ojson j{{"table_id", doc.table_id},
          {"page", ojson{{"width", doc.page_width}, {"height", doc.page_height}}},
          {"spans", std::move(spans)},
          {"cell_boxes", std::move(boxes)}};
  return dump(j);
}

LayoutDocument parse_layout_records(std::string_view json) {
  constexpr const char* what = "layout records";
  const ojson j = parse_json(json, what);
  LayoutDocument doc;
  doc.table_id = field<std::string>(j, "table_id", what);
  const auto page = field<ojson>(j, "page", what);
  doc.page_width = field<Px>(page, "width", what);
  doc.page_height = field<Px>(page, "height", what);
  if (doc.page_width <= 0 || doc.page_height <= 0) schema_error("layout records: page must be non-empty");
  const auto spans = field<ojson>(j, "spans", what);
  if (!spans.is_array()) schema_error("layout records: 'spans' must be an array");
  for (const auto& sj : spans) {
    TextSpan s;
    s.text = field<std::string>(sj, "text", what);
    if (s.text.empty()) schema_error("layout records: span text must be non-empty");
    s.bbox = bbox_from(field<ojson>(sj, "bbox", what), what);
    s.cell_id = field<std::string>(sj, "cell_id", what);
    doc.spans.push_back(std::move(s));
  }
  // cell_boxes is optional on input.
  if (j.contains("cell_boxes")) {
    const auto& boxes = j.at("cell_boxes");
    if (!boxes.is_array()) schema_error("layout records: 'cell_boxes' must be an array");
    for (const auto& bj : boxes) {
      doc.cell_boxes.emplace_back(field<std::string>(bj, "cell_id", what),
                                  bbox_from(field<ojson>(bj, "bbox", what), what));
    }
  }
  return doc;
}

const std::string& ModalityBundle::content(ExportFormat format) const noexcept {
  switch (format) {
    case ExportFormat::CleanHtml: return clean_html;
    case ExportFormat::Markdown: return markdown;
    case ExportFormat::Json: return table_json;
    case ExportFormat::Layout: return layout_json;
    case ExportFormat::Svg: return svg;
  }
  return svg;
}

ModalityBundle make_bundle(const TableGrid& grid, const LayoutDocument& doc, const LayoutStyle& style) {
  ModalityBundle b;
  b.table_id = grid.table_id();
  b.clean_html = to_clean_html(grid);
  b.markdown = to_markdown(grid);
  b.table_json = to_json_table(grid);
  b.layout_json = to_layout_records(doc);
  b.svg = render_svg(doc, grid, style);
  return b;
}

}  // namespace tcqa
