// SPDX-License-Identifier: Apache-2.0
#include "tcqa/table_model.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <optional>
#include <unordered_set>
#include <utility>

#include "tcqa/error.hpp"
#include "tcqa/text.hpp"

namespace tcqa {

namespace {

// HTML caps (colspan per the living standard, rowspan likewise).
constexpr int kMaxColSpan = 1000;
constexpr int kMaxRowSpan = 65534;

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

bool is_name_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
         c == '-' || c == '_' || c == ':' || c == '.';
}

std::optional<char32_t> named_entity(std::string_view name) {
  struct Entry {
    std::string_view name;
    char32_t cp;
  };
  static constexpr Entry kEntities[] = {
      {"amp", U'&'},      {"lt", U'<'},       {"gt", U'>'},       {"quot", U'"'},
      {"apos", U'\''},    {"nbsp", 0x00A0},   {"yen", 0x00A5},    {"times", 0x00D7},
      {"minus", 0x2212},  {"ndash", 0x2013},  {"mdash", 0x2014},  {"copy", 0x00A9},
      {"reg", 0x00AE},    {"middot", 0x00B7}, {"hellip", 0x2026}, {"triangle", 0x25B3},
  };
  for (const auto& e : kEntities) {
    if (e.name == name) return e.cp;
  }
  return std::nullopt;
}

// Decodes character references; unknown references are kept verbatim.
std::string decode_entities(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] != '&') {
      out.push_back(s[i++]);
      continue;
    }
    const auto semi = s.find(';', i + 1);
    if (semi == std::string_view::npos || semi - i > 12) {
      out.push_back(s[i++]);
      continue;
    }
    const auto body = s.substr(i + 1, semi - i - 1);
    std::optional<char32_t> cp;
    if (!body.empty() && body[0] == '#') {
      std::uint32_t value = 0;
      const bool hex = body.size() > 1 && (body[1] == 'x' || body[1] == 'X');
      const auto digits = body.substr(hex ? 2 : 1);
      auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value,
                                       hex ? 16 : 10);
      if (!digits.empty() && ec == std::errc{} && ptr == digits.data() + digits.size()) {
        const bool valid = value > 0 && value <= 0x10FFFF && !(value >= 0xD800 && value <= 0xDFFF);
        cp = valid ? static_cast<char32_t>(value) : char32_t{0xFFFD};
      }
    } else {
      cp = named_entity(body);
    }
    if (!cp) {
      out.push_back(s[i++]);
      continue;
    }
    append_utf8(out, *cp);
    i = semi + 1;
  }
  return out;
}

struct Attribute {
  std::string name;
  std::string value;
};

struct Tag {
  std::string name;
  bool closing = false;
  std::vector<Attribute> attributes;

  const std::string* attribute(std::string_view key) const {
    for (const auto& a : attributes) {
      if (a.name == key) return &a.value;
    }
    return nullptr;
  }
};

[[noreturn]] void malformed(const std::string& what) {
  throw Error(ErrorCode::MalformedHtml, what);
}

// Minimal streaming tokenizer: yields start/end tags and text runs.
class Tokenizer {
 public:
  explicit Tokenizer(std::string_view html) : html_(html) {}

  bool at_end() const { return pos_ >= html_.size(); }

  // Returns text up to the next markup construct.
  std::string_view take_text() {
    const auto start = pos_;
    while (pos_ < html_.size()) {
      if (html_[pos_] == '<' && pos_ + 1 < html_.size()) {
        const char n = html_[pos_ + 1];
        if (n == '!' || n == '?' || n == '/' || std::isalpha(static_cast<unsigned char>(n))) break;
      }
      ++pos_;
    }
    return html_.substr(start, pos_ - start);
  }

  // Precondition: positioned on '<'. Returns nullopt for comments/doctype.
  std::optional<Tag> take_markup() {
    if (html_.compare(pos_, 4, "<!--") == 0) {
      const auto end = html_.find("-->", pos_ + 4);
      if (end == std::string_view::npos) malformed("unterminated comment");
      pos_ = end + 3;
      return std::nullopt;
    }
    if (html_[pos_ + 1] == '!' || html_[pos_ + 1] == '?') {
      const auto end = html_.find('>', pos_);
      if (end == std::string_view::npos) malformed("unterminated declaration");
      pos_ = end + 1;
      return std::nullopt;
    }
    Tag tag;
    ++pos_;
    if (html_[pos_] == '/') {
      tag.closing = true;
      ++pos_;
    }
    const auto name_start = pos_;
    while (pos_ < html_.size() && is_name_char(html_[pos_])) ++pos_;
    tag.name = lower(html_.substr(name_start, pos_ - name_start));
    if (tag.name.empty()) malformed("empty tag name at offset " + std::to_string(name_start));
    while (true) {
      skip_space();
      if (pos_ >= html_.size()) malformed("unterminated tag <" + tag.name + ">");
      const char c = html_[pos_];
      if (c == '>') {
        ++pos_;
        break;
      }
      if (c == '/') {
        ++pos_;
        continue;
      }
      const auto attr_start = pos_;
      while (pos_ < html_.size() && !is_html_space(html_[pos_]) && html_[pos_] != '=' &&
             html_[pos_] != '>' && html_[pos_] != '/') {
        if (html_[pos_] == '"' || html_[pos_] == '\'' || html_[pos_] == '<') {
          malformed("unexpected character in attribute name of <" + tag.name + ">");
        }
        ++pos_;
      }
      Attribute attr{lower(html_.substr(attr_start, pos_ - attr_start)), {}};
      skip_space();
      if (pos_ < html_.size() && html_[pos_] == '=') {
        ++pos_;
        skip_space();
        if (pos_ >= html_.size()) malformed("unterminated attribute in <" + tag.name + ">");
        const char q = html_[pos_];
        if (q == '"' || q == '\'') {
          const auto end = html_.find(q, pos_ + 1);
          if (end == std::string_view::npos) malformed("unterminated attribute value in <" + tag.name + ">");
          attr.value = decode_entities(html_.substr(pos_ + 1, end - pos_ - 1));
          pos_ = end + 1;
        } else {
          const auto vstart = pos_;
          while (pos_ < html_.size() && !is_html_space(html_[pos_]) && html_[pos_] != '>') ++pos_;
          attr.value = decode_entities(html_.substr(vstart, pos_ - vstart));
        }
      }
      if (!tag.closing) tag.attributes.push_back(std::move(attr));
    }
    if (!tag.closing && (tag.name == "script" || tag.name == "style")) {
      const auto close = lower(html_.substr(pos_)).find("</" + tag.name);
      if (close == std::string::npos) malformed("unterminated <" + tag.name + ">");
      pos_ += close;
    }
    return tag;
  }

 private:
  void skip_space() {
    while (pos_ < html_.size() && is_html_space(html_[pos_])) ++pos_;
  }

  std::string_view html_;
  std::size_t pos_ = 0;
};

struct RawCell {
  std::string text;  // uncollapsed
  std::optional<std::string> id;
  int row_span = 1;  // 0 means "to the last row"
  int col_span = 1;
  bool is_header = false;
};

int parse_span(const std::string* value, bool allow_zero, int cap) {
  if (!value) return 1;
  std::string_view v = *value;
  while (!v.empty() && is_html_space(v.front())) v.remove_prefix(1);
  int n = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), n);
  if (ec == std::errc::result_out_of_range) return cap;
  if (ec != std::errc{} || ptr == v.data() || n < 0) return 1;
  if (n == 0) return allow_zero ? 0 : 1;
  return std::min(n, cap);
}

bool is_line_break_tag(std::string_view name) {
  return name == "br" || name == "p" || name == "div" || name == "li" || name == "hr";
}

std::vector<std::vector<RawCell>> collect_rows(std::string_view html, std::string_view id_attribute) {
  Tokenizer tok(html);
  std::vector<std::vector<RawCell>> rows;
  bool seen_table = false;
  bool in_table = false;
  bool in_row = false;
  std::optional<RawCell> cell;

  auto close_cell = [&] {
    if (cell) {
      rows.back().push_back(std::move(*cell));
      cell.reset();
    }
  };
  auto close_row = [&] {
    close_cell();
    in_row = false;
  };

  while (!tok.at_end()) {
    const auto text = tok.take_text();
    if (cell) cell->text.append(text);
    if (tok.at_end()) break;
    const auto tag = tok.take_markup();
    if (!tag) continue;
    const auto& name = tag->name;

    if (name == "table") {
      if (tag->closing) {
        if (!in_table) malformed("</table> without matching <table>");
        close_row();
        in_table = false;
      } else {
        if (in_table) throw Error(ErrorCode::NestedTable, "nested <table> element");
        if (seen_table) malformed("more than one <table> element");
        seen_table = in_table = true;
      }
      continue;
    }
    if (!in_table) continue;

    if (name == "tr") {
      close_row();
      if (!tag->closing) {
        rows.emplace_back();
        in_row = true;
      }
    } else if (name == "td" || name == "th") {
      close_cell();
      if (tag->closing) continue;
      if (!in_row) {
        rows.emplace_back();
        in_row = true;
      }
      RawCell c;
      c.is_header = name == "th";
      c.row_span = parse_span(tag->attribute("rowspan"), true, kMaxRowSpan);
      c.col_span = parse_span(tag->attribute("colspan"), false, kMaxColSpan);
      if (const auto* id = tag->attribute(id_attribute); id && !id->empty()) c.id = *id;
      cell = std::move(c);
    } else if (name == "thead" || name == "tbody" || name == "tfoot") {
      close_row();
    } else if (cell && is_line_break_tag(name)) {
      cell->text.push_back(' ');
    }
  }
  if (in_table) malformed("unterminated <table> element");
  if (!seen_table) malformed("no <table> element found");
  return rows;
}

std::string synthetic_id(int row, int col) {
  return "r" + std::to_string(row) + "c" + std::to_string(col);
}

}  // namespace

TableGrid TableGrid::from_cells(std::string table_id, int n_rows, int n_cols, std::vector<Cell> cells) {
  if (n_rows < 1 || n_cols < 1) throw Error(ErrorCode::EmptyTable, "table has no rows or columns");
  TableGrid grid;
  grid.table_id_ = std::move(table_id);
  grid.n_rows_ = n_rows;
  grid.n_cols_ = n_cols;
  constexpr auto kFree = static_cast<std::size_t>(-1);
  grid.occupancy_.assign(static_cast<std::size_t>(n_rows) * n_cols, kFree);

  std::sort(cells.begin(), cells.end(), [](const Cell& a, const Cell& b) {
    return std::pair(a.anchor_row, a.anchor_col) < std::pair(b.anchor_row, b.anchor_col);
  });
  std::unordered_set<std::string_view> ids;
  for (std::size_t k = 0; k < cells.size(); ++k) {
    const Cell& c = cells[k];
    if (c.row_span < 1 || c.col_span < 1 || c.anchor_row < 0 || c.anchor_col < 0 ||
        c.anchor_row + c.row_span > n_rows || c.anchor_col + c.col_span > n_cols) {
      throw Error(ErrorCode::InvalidArgument, "cell '" + c.cell_id + "' does not fit the grid");
    }
    if (!ids.insert(c.cell_id).second) {
      throw Error(ErrorCode::DuplicateCellId, "duplicate cell id '" + c.cell_id + "'");
    }
    for (int r = c.anchor_row; r < c.anchor_row + c.row_span; ++r) {
      for (int col = c.anchor_col; col < c.anchor_col + c.col_span; ++col) {
        auto& slot = grid.occupancy_[static_cast<std::size_t>(r) * n_cols + col];
        if (slot != kFree) {
          throw Error(ErrorCode::SpanConflict, "grid position (" + std::to_string(r) + "," +
                                                   std::to_string(col) + ") claimed by two cells");
        }
        slot = k;
      }
    }
  }
  if (std::find(grid.occupancy_.begin(), grid.occupancy_.end(), kFree) != grid.occupancy_.end()) {
    throw Error(ErrorCode::InvalidArgument, "grid positions left uncovered");
  }
  grid.cells_ = std::move(cells);
  return grid;
}

const Cell* TableGrid::find_cell(std::string_view cell_id) const noexcept {
  for (const auto& c : cells_) {
    if (c.cell_id == cell_id) return &c;
  }
  return nullptr;
}

const Cell& TableGrid::cell_by_id(std::string_view cell_id) const {
  if (const Cell* c = find_cell(cell_id)) return *c;
  throw Error(ErrorCode::UnknownCellId,
              "unknown cell id '" + std::string(cell_id) + "' in table '" + table_id_ + "'");
}

const Cell& cell_by_id(const TableGrid& grid, std::string_view cell_id) {
  return grid.cell_by_id(cell_id);
}

TableGrid parse_html_table(std::string_view html, std::string table_id, std::string_view id_attribute) {
  const auto attr = lower(id_attribute);
  auto rows = collect_rows(html, attr);
  const int n_rows = static_cast<int>(rows.size());
  if (n_rows == 0) throw Error(ErrorCode::EmptyTable, "table has zero rows");

  // occupied[r] grows to the right as cells are placed.
  std::vector<std::vector<bool>> occupied(n_rows);
  auto is_taken = [&](int r, int c) {
    return c < static_cast<int>(occupied[r].size()) && occupied[r][c];
  };

  struct Placed {
    RawCell raw;
    int row, col, row_span, col_span;
  };
  std::vector<Placed> placed;
  int n_cols = 0;
  for (int r = 0; r < n_rows; ++r) {
    int c = 0;
    for (auto& raw : rows[r]) {
      while (is_taken(r, c)) ++c;
      const int rs = raw.row_span == 0 ? n_rows - r : std::min(raw.row_span, n_rows - r);
      const int cs = raw.col_span;
      for (int rr = r; rr < r + rs; ++rr) {
        auto& line = occupied[rr];
        if (static_cast<int>(line.size()) < c + cs) line.resize(c + cs, false);
        for (int cc = c; cc < c + cs; ++cc) {
          if (line[cc]) {
            throw Error(ErrorCode::SpanConflict, "grid position (" + std::to_string(rr) + "," +
                                                     std::to_string(cc) + ") claimed by two cells");
          }
          line[cc] = true;
        }
      }
      n_cols = std::max(n_cols, c + cs);
      placed.push_back({std::move(raw), r, c, rs, cs});
      c += cs;
    }
  }
  if (n_cols == 0) throw Error(ErrorCode::EmptyTable, "table has no cells");

  std::unordered_set<std::string> explicit_ids;
  for (const auto& p : placed) {
    if (p.raw.id && !explicit_ids.insert(*p.raw.id).second) {
      throw Error(ErrorCode::DuplicateCellId, "duplicate cell id '" + *p.raw.id + "'");
    }
  }
  std::unordered_set<std::string> used = explicit_ids;
  auto fresh_id = [&](int r, int c) {
    const auto base = synthetic_id(r, c);
    auto id = base;
    for (int k = 1; used.count(id); ++k) id = base + "_" + std::to_string(k);
    used.insert(id);
    return id;
  };

  std::vector<Cell> cells;
  cells.reserve(placed.size());
  for (auto& p : placed) {
    Cell cell;
    cell.text = collapse_whitespace(decode_entities(p.raw.text));
    cell.anchor_row = p.row;
    cell.anchor_col = p.col;
    cell.row_span = p.row_span;
    cell.col_span = p.col_span;
    cell.is_header = p.raw.is_header;
    cell.cell_id = p.raw.id ? std::move(*p.raw.id) : std::string{};
    cells.push_back(std::move(cell));
  }
  // Ragged rows and holes become synthetic empty cells.
  for (int r = 0; r < n_rows; ++r) {
    for (int c = 0; c < n_cols; ++c) {
      if (!is_taken(r, c)) {
        Cell pad;
        pad.anchor_row = r;
        pad.anchor_col = c;
        cells.push_back(std::move(pad));
      }
    }
  }
  std::sort(cells.begin(), cells.end(), [](const Cell& a, const Cell& b) {
    return std::pair(a.anchor_row, a.anchor_col) < std::pair(b.anchor_row, b.anchor_col);
  });
  for (auto& cell : cells) {
    if (cell.cell_id.empty()) cell.cell_id = fresh_id(cell.anchor_row, cell.anchor_col);
  }
  return TableGrid::from_cells(std::move(table_id), n_rows, n_cols, std::move(cells));
}

bool same_structure(const TableGrid& a, const TableGrid& b) {
  if (a.n_rows() != b.n_rows() || a.n_cols() != b.n_cols() || a.cells().size() != b.cells().size()) {
    return false;
  }
  for (std::size_t k = 0; k < a.cells().size(); ++k) {
    const Cell& x = a.cells()[k];
    const Cell& y = b.cells()[k];
    if (x.text != y.text || x.anchor_row != y.anchor_row || x.anchor_col != y.anchor_col ||
        x.row_span != y.row_span || x.col_span != y.col_span || x.is_header != y.is_header) {
      return false;
    }
  }
  return true;
}

}  // namespace tcqa
