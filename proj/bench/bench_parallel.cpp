// SPDX-License-Identifier: Apache-2.0
//
// Serial reference vs OpenMP kernel timings. Each kernel runs both ways on
// the same input; results must match before timings are reported.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <random>
#include <string>

#include "generators.hpp"
#include "tcqa/fusion_reference.hpp"
#include "tcqa/io.hpp"
#include "tcqa/metrics.hpp"
#include "tcqa/parallel.hpp"
#include "tcqa/qa_builder.hpp"

using namespace tcqa;

namespace {

template <typename Fn>
double best_of(int reps, Fn&& fn) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

void report(const char* name, double serial, double parallel, bool same) {
  std::printf("%-14s serial %8.2f ms  parallel %8.2f ms  speedup %5.2fx  %s\n", name, serial * 1e3, parallel * 1e3,
              serial / parallel, same ? "match" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  const int tables = argc > 1 ? std::atoi(argv[1]) : 500;
  const int reps = 3;
  std::printf("threads=%d tables=%d\n", max_threads(), tables);
  bool all_same = true;

  {
    testing::Rng rng(1);
    testing::TempDir dir;
    testing::write_corpus(dir.path(), rng, tables, 0, false);
    const auto sources = parse_sources_jsonl(read_file(dir.path() / "sources.jsonl"));
    // Keep HTML in memory so disk reads do not dominate.
    std::map<std::string, std::string> html;
    const auto disk = directory_loader(dir.path() / "tables");
    for (const auto& s : sources) html.emplace(s.table_id, *disk(s.table_id));
    const TableLoader load = [&](const std::string& id) -> std::optional<std::string> { return html.at(id); };
    DatasetBuild a;
    DatasetBuild b;
    const double s = best_of(reps, [&] { a = build_dataset(sources, load, Split::Train, {}, ExecPolicy::Serial); });
    const double p = best_of(reps, [&] { b = build_dataset(sources, load, Split::Train, {}, ExecPolicy::Parallel); });
    const bool same = a.manifest == b.manifest;
    all_same = all_same && same;
    report("build_dataset", s, p, same);
  }
  {
    std::mt19937_64 rng(2);
    std::vector<GoldAnswer> gold;
    std::vector<Prediction> preds;
    for (int i = 0; i < 200000; ++i) {
      const auto id = "q" + std::to_string(i);
      gold.push_back({id, std::to_string(rng() % 10000000)});
      preds.push_back({id, std::to_string(rng() % 10000000)});
    }
    ScoreReport a;
    ScoreReport b;
    const double s = best_of(reps, [&] { a = score(preds, gold, 0.5, ExecPolicy::Serial); });
    const double p = best_of(reps, [&] { b = score(preds, gold, 0.5, ExecPolicy::Parallel); });
    const bool same = a == b;
    all_same = all_same && same;
    report("score", s, p, same);
  }
  {
    fusion::FusionConfig cfg;
    const auto params = fusion::init_params(cfg);
    double a = 0;
    double b = 0;
    const double s = best_of(reps, [&] { a = fusion::gradcheck(params, cfg, 5000, ExecPolicy::Serial); });
    const double p = best_of(reps, [&] { b = fusion::gradcheck(params, cfg, 5000, ExecPolicy::Parallel); });
    all_same = all_same && a == b;
    report("gradcheck", s, p, a == b);
  }
  return all_same ? 0 : 1;
}
