// SPDX-License-Identifier: Apache-2.0
#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "tcqa/modality_export.hpp"
#include "tcqa/parallel.hpp"

namespace {

void add_style_flags(CLI::App& cmd, tcqa::TableOptions& table) {
  auto& s = table.style;
  cmd.add_option("--em", s.em, "line height and font size in px")->capture_default_str();
  cmd.add_option("--pad", s.pad, "cell padding in px")->capture_default_str();
  cmd.add_option("--border", s.border, "grid line width in px")->capture_default_str();
  cmd.add_option("--ascii-advance", s.ascii_advance, "advance of ASCII characters in px")->capture_default_str();
  cmd.add_option("--wide-advance", s.wide_advance, "advance of other characters in px")->capture_default_str();
  cmd.add_option("--page-limit", s.page_limit, "largest allowed page side in px")->capture_default_str();
  cmd.add_option("--id-attr", table.id_attribute, "attribute carrying cell IDs")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  using namespace tcqa;
  cli::configure_logging();

  CLI::App app{"Table-cell QA toolchain: modality export, dataset build, scoring and fusion checks"};
  app.require_subcommand(1);

  cli::BuildOptions build;
  std::string split = "train";
  bool serial = false;
  auto* build_cmd = app.add_subcommand("build", "build a bundle from HTML tables and source QA");
  build_cmd->add_option("--tables", build.tables_dir, "directory of <table_id>.html files")->required();
  build_cmd->add_option("--sources", build.sources, "sources.jsonl")->required();
  build_cmd->add_option("--split", split, "train or test")
      ->check(CLI::IsMember({"train", "test"}))
      ->capture_default_str();
  build_cmd->add_option("--out", build.out_dir, "bundle directory")->required();
  build_cmd->add_option("--qa-id-field", build.fields.qa_id)->capture_default_str();
  build_cmd->add_option("--table-id-field", build.fields.table_id)->capture_default_str();
  build_cmd->add_option("--question-field", build.fields.question)->capture_default_str();
  build_cmd->add_option("--cell-id-field", build.fields.answer_cell_id)->capture_default_str();
  build_cmd->add_flag("--serial", serial, "process tables on one thread");
  add_style_flags(*build_cmd, build.table);

  cli::ExportOptions exp;
  exp.formats = {"clean-html", "markdown", "json", "layout", "svg"};
  auto* export_cmd = app.add_subcommand("export", "export one table into modality files");
  export_cmd->add_option("table", exp.table_html, "table HTML file")->required();
  export_cmd->add_option("--formats", exp.formats, "clean-html,markdown,json,layout,svg")
      ->delimiter(',')
      ->capture_default_str();
  export_cmd->add_option("--out", exp.out_dir, "output directory")->required();
  add_style_flags(*export_cmd, exp.table);

  cli::ScoreOptions sc;
  auto* score_cmd = app.add_subcommand("score", "score predictions with accuracy and ANLS");
  score_cmd->add_option("--gold", sc.gold, "gold qa/<split>.jsonl")->required();
  score_cmd->add_option("--predictions", sc.predictions, "predictions.jsonl")->required();
  score_cmd->add_option("--tau", sc.tau, "ANLS threshold")->check(CLI::Range(0.0, 1.0))->capture_default_str();
  score_cmd->add_option("--report", sc.report, "report.json path")->capture_default_str();

  cli::FuseCheckOptions fc;
  std::string activation = "gelu";
  auto* fuse_cmd = app.add_subcommand("fuse-check", "sequence statistics and layout-MLP gradient check");
  fuse_cmd->add_option("--bundle", fc.bundle, "bundle directory (optional)");
  fuse_cmd->add_option("--d", fc.config.d, "embedding dimension")->capture_default_str();
  fuse_cmd->add_option("--hidden", fc.config.hidden, "MLP hidden width")->capture_default_str();
  fuse_cmd->add_option("--activation", activation, "gelu, relu or tanh")
      ->check(CLI::IsMember({"gelu", "relu", "tanh"}))
      ->capture_default_str();
  fuse_cmd->add_option("--image-tokens", fc.config.n_image_tokens, "image placeholder count")->capture_default_str();
  fuse_cmd->add_option("--seed", fc.config.seed, "parameter and embedding seed")->capture_default_str();
  fuse_cmd->add_option("--trials", fc.trials, "gradcheck trials")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Help requests exit 0; everything else is a usage error.
    return app.exit(e) == 0 ? cli::kExitOk : cli::kExitInputError;
  }

  if (*build_cmd) {
    build.split = *parse_split(split);
    build.policy = serial ? ExecPolicy::Serial : ExecPolicy::Parallel;
    return cli::run_build(build, std::cout);
  }
  if (*export_cmd) {
    for (const auto& name : exp.formats) {
      if (!parse_format_name(name)) {
        std::cerr << "tcqa: unknown format '" << name << "'\n\n" << export_cmd->help();
        return cli::kExitInputError;
      }
    }
    return cli::run_export(exp, std::cout);
  }
  if (*score_cmd) return cli::run_score(sc, std::cout);
  if (*fuse_cmd) {
    fc.config.activation = *fusion::parse_activation(activation);
    return cli::run_fuse_check(fc, std::cout);
  }
  return cli::kExitInputError;
}
