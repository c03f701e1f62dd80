// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tcqa/layout_engine.hpp"
#include "tcqa/table_model.hpp"

namespace tcqa {

enum class ExportFormat { CleanHtml, Markdown, Json, Layout, Svg };

inline constexpr std::array<ExportFormat, 5> kAllExportFormats = {
    ExportFormat::CleanHtml, ExportFormat::Markdown, ExportFormat::Json, ExportFormat::Layout,
    ExportFormat::Svg};

/// CLI name of a format ("clean-html", "markdown", "json", "layout", "svg").
std::string_view format_name(ExportFormat format) noexcept;
std::optional<ExportFormat> parse_format_name(std::string_view name) noexcept;
/// File name inside a bundle's exports/ directory, e.g. "t1.clean.html".
std::string export_file_name(std::string_view table_id, ExportFormat format);

/// table/tr/th/td with only rowspan/colspan; one row per line.
std::string to_clean_html(const TableGrid& grid);

/// Pipe table with spanned cells duplicated into every position they cover.
std::string to_markdown(const TableGrid& grid);

/// Reads a pipe table back into a spanless grid. The first line becomes the
/// header row; cells get synthetic IDs. Throws Error{SchemaViolation}.
TableGrid parse_markdown_table(std::string_view markdown, std::string table_id);

/// Lossless structured-text export; compact, fixed key order.
std::string to_json_table(const TableGrid& grid);
/// Throws Error{SchemaViolation} or any grid validation error.
TableGrid parse_json_table(std::string_view json);

std::string to_layout_records(const LayoutDocument& doc);
/// Throws Error{SchemaViolation}.
LayoutDocument parse_layout_records(std::string_view json);

/// Every modality of one table, already serialized.
struct ModalityBundle {
  std::string table_id;
  std::string clean_html;
  std::string markdown;
  std::string table_json;
  std::string layout_json;
  std::string svg;

  const std::string& content(ExportFormat format) const noexcept;
};

ModalityBundle make_bundle(const TableGrid& grid, const LayoutDocument& doc, const LayoutStyle& style);

}  // namespace tcqa
