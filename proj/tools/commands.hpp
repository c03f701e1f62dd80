// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "tcqa/fusion_reference.hpp"
#include "tcqa/metrics.hpp"
#include "tcqa/qa_builder.hpp"

namespace tcqa::cli {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitEmptyResult = 2;
inline constexpr int kExitCheckFailed = 3;

struct BuildOptions {
  std::filesystem::path tables_dir;
  std::filesystem::path sources;
  Split split = Split::Train;
  std::filesystem::path out_dir;
  TableOptions table;
  SourceFieldMap fields;
  ExecPolicy policy = ExecPolicy::Parallel;
};

struct ExportOptions {
  std::filesystem::path table_html;
  std::vector<std::string> formats;
  std::filesystem::path out_dir;
  TableOptions table;
};

struct ScoreOptions {
  std::filesystem::path gold;
  std::filesystem::path predictions;
  double tau = kDefaultTau;
  std::filesystem::path report = "report.json";
};

struct FuseCheckOptions {
  std::filesystem::path bundle;  // empty: gradcheck only
  fusion::FusionConfig config;
  int trials = 100;
  double max_error = 1e-4;
};

// Data goes to `out`; diagnostics go to the log (stderr).
int run_build(const BuildOptions& opts, std::ostream& out);
int run_export(const ExportOptions& opts, std::ostream& out);
int run_score(const ScoreOptions& opts, std::ostream& out);
int run_fuse_check(const FuseCheckOptions& opts, std::ostream& out);

/// Reads the log level from TCQA_LOG_LEVEL (default warn).
void configure_logging();

}  // namespace tcqa::cli
