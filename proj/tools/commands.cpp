// SPDX-License-Identifier: Apache-2.0
#include "commands.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <ostream>

#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "tcqa/error.hpp"
#include "tcqa/io.hpp"

namespace tcqa::cli {

namespace fs = std::filesystem;

void configure_logging() {
  auto logger = spdlog::stderr_logger_st("tcqa");
  logger->set_pattern("tcqa: %l: %v");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("TCQA_LOG_LEVEL")) {
    const auto level = spdlog::level::from_str(env);
    // from_str maps unknown names to off; keep the default instead.
    if (level != spdlog::level::off || std::string_view(env) == "off") spdlog::set_level(level);
  }
}

int run_build(const BuildOptions& opts, std::ostream& out) {
  std::vector<SourceQA> sources;
  try {
    opts.table.style.validate();
    if (!fs::is_directory(opts.tables_dir)) {
      throw Error(ErrorCode::Io, "tables directory not found: " + opts.tables_dir.string());
    }
    sources = parse_sources_jsonl(read_file(opts.sources), opts.fields);
  } catch (const Error& e) {
    spdlog::error("{}: {}", opts.sources.filename().string(), e.what());
    return kExitInputError;
  }
  spdlog::info("building {} sources from {}", sources.size(), opts.tables_dir.string());

  const auto build = build_dataset(sources, directory_loader(opts.tables_dir), opts.split, opts.table, opts.policy);
  for (const auto& f : build.manifest.failed_tables) {
    spdlog::warn("table {} skipped: {}: {}", f.table_id, f.error, f.detail);
  }
  try {
    write_bundle(opts.out_dir, build);
  } catch (const Error& e) {
    spdlog::error("{}", e.what());
    return kExitInputError;
  }
  const auto& m = build.manifest;
  out << "pairs=" << m.pairs.size() << " skipped=" << m.skipped.size() << '\n';
  return m.pairs.empty() ? kExitEmptyResult : kExitOk;
}

int run_export(const ExportOptions& opts, std::ostream& out) {
  std::vector<ExportFormat> formats;
  for (const auto& name : opts.formats) {
    const auto f = parse_format_name(name);
    if (!f) {
      spdlog::error("unknown format '{}' (expected clean-html, markdown, json, layout or svg)", name);
      return kExitInputError;
    }
    if (std::find(formats.begin(), formats.end(), *f) == formats.end()) formats.push_back(*f);
  }
  if (formats.empty()) {
    spdlog::error("no export formats requested");
    return kExitInputError;
  }
  try {
    const auto table_id = opts.table_html.stem().string();
    const auto grid = parse_html_table(read_file(opts.table_html), table_id, opts.table.id_attribute);
    const auto doc = compute_layout(grid, opts.table.style);
    for (auto format : formats) {
      std::string content;
      switch (format) {
        case ExportFormat::CleanHtml: content = to_clean_html(grid); break;
        case ExportFormat::Markdown: content = to_markdown(grid); break;
        case ExportFormat::Json: content = to_json_table(grid); break;
        case ExportFormat::Layout: content = to_layout_records(doc); break;
        case ExportFormat::Svg: content = render_svg(doc, grid, opts.table.style); break;
      }
      const auto path = opts.out_dir / export_file_name(table_id, format);
      write_file_atomic(path, content);
      out << path.string() << '\n';
    }
  } catch (const Error& e) {
    spdlog::error("{}: {}: {}", opts.table_html.string(), to_string(e.code()), e.what());
    return kExitInputError;
  }
  return kExitOk;
}

int run_score(const ScoreOptions& opts, std::ostream& out) {
  ScoreReport report;
  try {
    std::vector<GoldAnswer> gold;
    std::vector<QAPair> pairs;
    try {
      pairs = parse_qa_pairs_jsonl(read_file(opts.gold));
    } catch (const Error& e) {
      throw Error(e.code(), opts.gold.filename().string() + " " + e.what());
    }
    for (auto& p : pairs) gold.push_back({std::move(p.qa_id), std::move(p.answer)});
    std::vector<Prediction> predictions;
    try {
      predictions = parse_predictions_jsonl(read_file(opts.predictions));
    } catch (const Error& e) {
      throw Error(e.code(), opts.predictions.filename().string() + " " + e.what());
    }
    report = score(predictions, gold, opts.tau);
    write_file_atomic(opts.report, report_to_json(report));
  } catch (const Error& e) {
    spdlog::error("{}", e.what());
    return kExitInputError;
  }
  if (!report.missing.empty()) spdlog::warn("{} gold items have no prediction", report.missing.size());
  if (!report.extra.empty()) spdlog::warn("{} predictions have no gold item", report.extra.size());
  out << summary_line(report) << '\n';
  return kExitOk;
}

int run_fuse_check(const FuseCheckOptions& opts, std::ostream& out) {
  fusion::MlpParams params;
  try {
    params = fusion::init_params(opts.config);
  } catch (const Error& e) {
    spdlog::error("{}", e.what());
    return kExitInputError;
  }
  bool ok = true;
  if (!opts.bundle.empty()) {
    std::size_t count = 0;
    std::size_t min_len = 0;
    std::size_t max_len = 0;
    double total = 0.0;
    std::size_t violations = 0;
    try {
      std::map<std::string, LayoutDocument> layouts;
      std::vector<QAPair> pairs;
      for (const char* split : {"train", "test"}) {
        const auto path = opts.bundle / "qa" / (std::string(split) + ".jsonl");
        if (!fs::exists(path)) continue;
        auto part = parse_qa_pairs_jsonl(read_file(path));
        pairs.insert(pairs.end(), part.begin(), part.end());
      }
      if (pairs.empty()) spdlog::warn("no QA pairs found under {}", opts.bundle.string());
      for (const auto& p : pairs) {
        auto it = layouts.find(p.table_id);
        if (it == layouts.end()) {
          const auto path = opts.bundle / "exports" / export_file_name(p.table_id, ExportFormat::Layout);
          it = layouts.emplace(p.table_id, parse_layout_records(read_file(path))).first;
        }
        const auto seq = fusion::assemble_sequence(it->second, p.question, params, opts.config);
        const auto len = seq.size();
        if (len != fusion::expected_length(it->second, p.question, opts.config) ||
            !fusion::has_block_order(seq, opts.config)) {
          ++violations;
          spdlog::warn("sequence for {} violates the length or block-order invariant", p.qa_id);
        }
        min_len = count == 0 ? len : std::min(min_len, len);
        max_len = std::max(max_len, len);
        total += static_cast<double>(len);
        ++count;
      }
    } catch (const Error& e) {
      spdlog::error("{}", e.what());
      return kExitInputError;
    }
    char buf[160];
    std::snprintf(buf, sizeof buf, "sequences=%zu min_len=%zu mean_len=%.2f max_len=%zu violations=%zu", count,
                  min_len, count ? total / static_cast<double>(count) : 0.0, max_len, violations);
    out << buf << '\n';
    ok = violations == 0;
  }
  double err = 0.0;
  try {
    err = fusion::gradcheck(params, opts.config, opts.trials);
  } catch (const Error& e) {
    spdlog::error("{}", e.what());
    return kExitInputError;
  }
  char buf[128];
  std::snprintf(buf, sizeof buf, "gradcheck activation=%s trials=%d max_rel_error=%.3e",
                std::string(fusion::to_string(opts.config.activation)).c_str(), opts.trials, err);
  out << buf << '\n';
  if (!(err < opts.max_error)) {
    spdlog::error("gradcheck error {:.3e} is not below {:.0e}", err, opts.max_error);
    ok = false;
  }
  return ok ? kExitOk : kExitCheckFailed;
}

}  // namespace tcqa::cli
