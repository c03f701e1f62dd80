// SPDX-License-Identifier: Apache-2.0
#include "tcqa/io.hpp"

#include <atomic>
#include <fstream>
#include <sstream>
#include <system_error>

#include <unistd.h>

#include "tcqa/error.hpp"

namespace tcqa {

namespace fs = std::filesystem;

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::Io, "error reading " + path.string());
  return std::move(ss).str();
}

void write_file_atomic(const fs::path& path, std::string_view content) {
  static std::atomic<unsigned> counter{0};
  std::error_code ec;
  if (path.has_parent_path()) {
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw Error(ErrorCode::Io, "cannot create " + path.parent_path().string() + ": " + ec.message());
  }
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid()) + "." + std::to_string(counter++);
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      fs::remove(tmp, ec);
      throw Error(ErrorCode::Io, "short write to " + tmp.string());
    }
  }
  fs::rename(tmp, path, ec);
  if (ec) {
    std::error_code ignored;
    fs::remove(tmp, ignored);
    throw Error(ErrorCode::Io, "cannot rename into " + path.string() + ": " + ec.message());
  }
}

void write_bundle(const fs::path& root, const DatasetBuild& build) {
  for (const auto& [table_id, html] : build.sources) {
    write_file_atomic(root / "tables" / (table_id + ".html"), html);
  }
  for (const auto& bundle : build.bundles) {
    for (auto format : kAllExportFormats) {
      write_file_atomic(root / "exports" / export_file_name(bundle.table_id, format), bundle.content(format));
    }
  }
  const auto split = std::string(to_string(build.manifest.split));
  write_file_atomic(root / "qa" / (split + ".jsonl"), qa_pairs_to_jsonl(build.manifest.pairs));
  write_file_atomic(root / "manifest.json", manifest_to_json(build.manifest));
}

}  // namespace tcqa
