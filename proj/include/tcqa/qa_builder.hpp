// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tcqa/layout_engine.hpp"
#include "tcqa/modality_export.hpp"
#include "tcqa/parallel.hpp"
#include "tcqa/table_model.hpp"

namespace tcqa {

struct SourceQA {
  std::string qa_id;
  std::string table_id;
  std::string question;
  std::string answer_cell_id;

  bool operator==(const SourceQA&) const = default;
};

/// One question/answer pair; the answer is the raw text of a single cell.
struct QAPair {
  std::string qa_id;
  std::string table_id;
  std::string question;
  std::string answer_cell_id;
  std::string answer;

  bool operator==(const QAPair&) const = default;
};

enum class Split { Train, Test };
std::string_view to_string(Split split) noexcept;
std::optional<Split> parse_split(std::string_view name) noexcept;

enum class SkipReason { UnknownCellId, EmptyAnswer, MissingTable, RenderFailed, DuplicateQaId };
std::string_view to_string(SkipReason reason) noexcept;

struct SkipRecord {
  std::string qa_id;
  std::string table_id;
  SkipReason reason;
  std::string detail;

  bool operator==(const SkipRecord&) const = default;
};

struct FailedTable {
  std::string table_id;
  std::string error;  // ErrorCode name
  std::string detail;

  bool operator==(const FailedTable&) const = default;
};

struct DatasetManifest {
  Split split = Split::Train;
  std::size_t n_sources = 0;
  std::vector<QAPair> pairs;         // sorted by qa_id
  std::vector<SkipRecord> skipped;   // sorted by qa_id, then source order
  std::vector<std::string> tables;   // successfully processed, sorted
  std::vector<FailedTable> failed_tables;

  bool operator==(const DatasetManifest&) const = default;
};

/// Field names of the source JSONL; lets native dumps with other key names be
/// ingested without conversion.
struct SourceFieldMap {
  std::string qa_id = "qa_id";
  std::string table_id = "table_id";
  std::string question = "question";
  std::string answer_cell_id = "answer_cell_id";
};

/// Parses JSONL source records. Blank lines are ignored; any other line must
/// be an object carrying the mapped string fields (numbers are accepted for
/// IDs). Throws Error{SchemaViolation} naming the 1-based line.
std::vector<SourceQA> parse_sources_jsonl(std::string_view text, const SourceFieldMap& fields = {});

/// Resolves the answer cell. Throws Error{UnknownCellId | EmptyAnswer}, or
/// Error{InvalidArgument} when the source refers to a different table.
QAPair build_qa_pair(const SourceQA& src, const TableGrid& grid);

struct TableOptions {
  LayoutStyle style;
  std::string id_attribute = std::string(kDefaultIdAttribute);
};

/// Result of running one table through parse, layout, render and export.
struct TableOutcome {
  std::string table_id;
  std::optional<TableGrid> grid;
  std::optional<ModalityBundle> bundle;
  std::optional<FailedTable> failure;
};

/// Never throws for bad input; failures are reported in the outcome.
TableOutcome process_table(std::string table_id, std::string_view html, const TableOptions& options);

/// Returns the HTML of a table, or nullopt when it does not exist.
using TableLoader = std::function<std::optional<std::string>(const std::string& table_id)>;

/// Loads `<dir>/<table_id>.html`.
TableLoader directory_loader(std::filesystem::path dir);

struct DatasetBuild {
  DatasetManifest manifest;
  std::vector<ModalityBundle> bundles;  // one per processed table, sorted
  std::vector<std::pair<std::string, std::string>> sources;  // table_id, html
};

/// Processes every referenced table (independently, per policy) and reduces
/// the results into a manifest ordered by qa_id. Every source ends up either
/// as a pair or as a skip record.
DatasetBuild build_dataset(const std::vector<SourceQA>& sources, const TableLoader& load, Split split,
                           const TableOptions& options = {}, ExecPolicy policy = ExecPolicy::Parallel);

std::string qa_pairs_to_jsonl(const std::vector<QAPair>& pairs);
/// Throws Error{SchemaViolation}.
std::vector<QAPair> parse_qa_pairs_jsonl(std::string_view text);
std::string manifest_to_json(const DatasetManifest& manifest);

}  // namespace tcqa
