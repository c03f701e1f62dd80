// SPDX-License-Identifier: Apache-2.0
#include "tcqa/qa_builder.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "tcqa/error.hpp"

namespace tcqa {

namespace {

using ojson = nlohmann::ordered_json;

[[noreturn]] void line_error(std::size_t line_no, const std::string& what) {
  throw Error(ErrorCode::SchemaViolation, "line " + std::to_string(line_no) + ": " + what);
}

// Visits each non-blank line with its 1-based number.
template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  std::size_t start = 0;
  std::size_t line_no = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    fn(line, line_no);
  }
}

ojson parse_object_line(std::string_view line, std::size_t line_no) {
  ojson j;
  try {
    j = ojson::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    line_error(line_no, std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) line_error(line_no, "expected a JSON object");
  return j;
}

std::string string_field(const ojson& j, const std::string& key, std::size_t line_no, bool allow_number) {
  const auto it = j.find(key);
  if (it == j.end()) line_error(line_no, "missing field '" + key + "'");
  if (it->is_string()) return it->get<std::string>();
  if (allow_number && it->is_number_integer()) return it->dump();
  line_error(line_no, "field '" + key + "' must be a string");
}

bool valid_table_id(std::string_view id) {
  return !id.empty() && id != "." && id != ".." && id.find_first_of("/\\", 0) == std::string_view::npos &&
         id.find('\0') == std::string_view::npos;
}

}  // namespace

std::string_view to_string(Split split) noexcept { return split == Split::Train ? "train" : "test"; }

std::optional<Split> parse_split(std::string_view name) noexcept {
  if (name == "train") return Split::Train;
  if (name == "test") return Split::Test;
  return std::nullopt;
}

std::string_view to_string(SkipReason reason) noexcept {
  switch (reason) {
    case SkipReason::UnknownCellId: return "UnknownCellId";
    case SkipReason::EmptyAnswer: return "EmptyAnswer";
    case SkipReason::MissingTable: return "MissingTable";
    case SkipReason::RenderFailed: return "RenderFailed";
    case SkipReason::DuplicateQaId: return "DuplicateQaId";
  }
  return "Unknown";
}

std::vector<SourceQA> parse_sources_jsonl(std::string_view text, const SourceFieldMap& fields) {
  std::vector<SourceQA> out;
  for_each_line(text, [&](std::string_view line, std::size_t line_no) {
    const ojson j = parse_object_line(line, line_no);
    SourceQA src;
    src.qa_id = string_field(j, fields.qa_id, line_no, true);
    src.table_id = string_field(j, fields.table_id, line_no, true);
    src.question = string_field(j, fields.question, line_no, false);
    src.answer_cell_id = string_field(j, fields.answer_cell_id, line_no, true);
    out.push_back(std::move(src));
  });
  return out;
}

QAPair build_qa_pair(const SourceQA& src, const TableGrid& grid) {
  if (src.table_id != grid.table_id()) {
    throw Error(ErrorCode::InvalidArgument,
                "source '" + src.qa_id + "' refers to table '" + src.table_id + "', got '" + grid.table_id() + "'");
  }
  const Cell& cell = grid.cell_by_id(src.answer_cell_id);
  if (cell.text.empty()) {
    throw Error(ErrorCode::EmptyAnswer, "cell '" + src.answer_cell_id + "' is empty");
  }
  return QAPair{src.qa_id, src.table_id, src.question, src.answer_cell_id, cell.text};
}

TableOutcome process_table(std::string table_id, std::string_view html, const TableOptions& options) {
  TableOutcome outcome;
  outcome.table_id = table_id;
  try {
    auto grid = parse_html_table(html, std::move(table_id), options.id_attribute);
    const auto doc = compute_layout(grid, options.style);
    outcome.bundle = make_bundle(grid, doc, options.style);
    outcome.grid = std::move(grid);
  } catch (const Error& e) {
    outcome.failure = FailedTable{outcome.table_id, std::string(to_string(e.code())), e.what()};
  } catch (const std::exception& e) {
    outcome.failure = FailedTable{outcome.table_id, "Internal", e.what()};
  }
  return outcome;
}

TableLoader directory_loader(std::filesystem::path dir) {
  return [dir = std::move(dir)](const std::string& table_id) -> std::optional<std::string> {
    std::ifstream in(dir / (table_id + ".html"), std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream ss;
    ss << in.rdbuf();
    return std::move(ss).str();
  };
}

DatasetBuild build_dataset(const std::vector<SourceQA>& sources, const TableLoader& load, Split split,
                           const TableOptions& options, ExecPolicy policy) {
  std::set<std::string> referenced;
  for (const auto& s : sources) {
    if (valid_table_id(s.table_id)) referenced.insert(s.table_id);
  }
  const std::vector<std::string> table_ids(referenced.begin(), referenced.end());

  struct Slot {
    std::optional<std::string> html;
    TableOutcome outcome;
  };
  std::vector<Slot> slots(table_ids.size());
  parallel_for(table_ids.size(), policy, [&](std::size_t i) {
    Slot& slot = slots[i];
    slot.outcome.table_id = table_ids[i];
    try {
      slot.html = load(table_ids[i]);
    } catch (const std::exception& e) {
      slot.outcome.failure = FailedTable{table_ids[i], "Io", e.what()};
      return;
    }
    if (slot.html) slot.outcome = process_table(table_ids[i], *slot.html, options);
  });

  std::map<std::string_view, const Slot*> by_table;
  for (std::size_t i = 0; i < table_ids.size(); ++i) by_table.emplace(table_ids[i], &slots[i]);

  DatasetBuild build;
  DatasetManifest& m = build.manifest;
  m.split = split;
  m.n_sources = sources.size();
  std::unordered_set<std::string_view> seen;
  for (const auto& src : sources) {
    auto skip = [&](SkipReason reason, std::string detail) {
      m.skipped.push_back(SkipRecord{src.qa_id, src.table_id, reason, std::move(detail)});
    };
    if (!seen.insert(src.qa_id).second) {
      skip(SkipReason::DuplicateQaId, "qa_id already used by an earlier source");
      continue;
    }
    const auto it = by_table.find(src.table_id);
    if (it == by_table.end()) {
      skip(SkipReason::MissingTable, "invalid table id");
      continue;
    }
    const Slot& slot = *it->second;
    if (slot.outcome.failure) {
      const auto& f = *slot.outcome.failure;
      skip(SkipReason::RenderFailed, f.error + ": " + f.detail);
      continue;
    }
    if (!slot.html) {
      skip(SkipReason::MissingTable, "no HTML for table '" + src.table_id + "'");
      continue;
    }
    try {
      m.pairs.push_back(build_qa_pair(src, *slot.outcome.grid));
    } catch (const Error& e) {
      skip(e.code() == ErrorCode::EmptyAnswer ? SkipReason::EmptyAnswer : SkipReason::UnknownCellId, e.what());
    }
  }
  std::sort(m.pairs.begin(), m.pairs.end(), [](const QAPair& a, const QAPair& b) { return a.qa_id < b.qa_id; });
  std::stable_sort(m.skipped.begin(), m.skipped.end(),
                   [](const SkipRecord& a, const SkipRecord& b) { return a.qa_id < b.qa_id; });

  for (auto& slot : slots) {
    if (slot.outcome.failure) {
      m.failed_tables.push_back(*slot.outcome.failure);
    } else if (slot.outcome.bundle) {
      m.tables.push_back(slot.outcome.table_id);
      build.bundles.push_back(std::move(*slot.outcome.bundle));
      build.sources.emplace_back(slot.outcome.table_id, std::move(*slot.html));
    }
  }
  return build;
}

std::string qa_pairs_to_jsonl(const std::vector<QAPair>& pairs) {
  std::string out;
  for (const auto& p : pairs) {
    const ojson j{{"qa_id", p.qa_id},
                  {"table_id", p.table_id},
                  {"question", p.question},
                  {"answer_cell_id", p.answer_cell_id},
                  {"answer", p.answer}};
    out += j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
    out += '\n';
  }
  return out;
}

std::vector<QAPair> parse_qa_pairs_jsonl(std::string_view text) {
  std::vector<QAPair> out;
  for_each_line(text, [&](std::string_view line, std::size_t line_no) {
    const ojson j = parse_object_line(line, line_no);
    QAPair p;
    p.qa_id = string_field(j, "qa_id", line_no, true);
    p.table_id = string_field(j, "table_id", line_no, true);
    p.question = string_field(j, "question", line_no, false);
    p.answer_cell_id = string_field(j, "answer_cell_id", line_no, true);
    p.answer = string_field(j, "answer", line_no, false);
    out.push_back(std::move(p));
  });
  return out;
}

std::string manifest_to_json(const DatasetManifest& m) {
  ojson skipped = ojson::array();
  for (const auto& s : m.skipped) {
    skipped.push_back(ojson{{"qa_id", s.qa_id},
                            {"table_id", s.table_id},
                            {"reason", to_string(s.reason)},
                            {"detail", s.detail}});
  }
  ojson failed = ojson::array();
  for (const auto& f : m.failed_tables) {
    failed.push_back(ojson{{"table_id", f.table_id}, {"error", f.error}, {"detail", f.detail}});
  }
  const ojson j{{"split", to_string(m.split)},
                {"counts", ojson{{"sources", m.n_sources},
                                 {"pairs", m.pairs.size()},
                                 {"skipped", m.skipped.size()},
                                 {"tables", m.tables.size()},
                                 {"tables_failed", m.failed_tables.size()}}},
                {"tables", m.tables},
                {"failed_tables", std::move(failed)},
                {"skipped", std::move(skipped)}};
  return j.dump(2, ' ', false, nlohmann::json::error_handler_t::replace) + "\n";
}

}  // namespace tcqa
