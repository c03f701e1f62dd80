// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "tcqa/qa_builder.hpp"

namespace tcqa {

/// Throws Error{Io}.
std::string read_file(const std::filesystem::path& path);

/// Writes to a sibling temp file and renames it into place, creating parent
/// directories as needed. Throws Error{Io}.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

/// Writes tables/, exports/, qa/<split>.jsonl and manifest.json under root.
void write_bundle(const std::filesystem::path& root, const DatasetBuild& build);

}  // namespace tcqa
