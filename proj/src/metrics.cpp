// SPDX-License-Identifier: Apache-2.0
#include "tcqa/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "tcqa/error.hpp"
#include "tcqa/text.hpp"

namespace tcqa {

std::string normalize_answer(std::string_view s) { return collapse_whitespace(s); }

std::size_t levenshtein(std::u32string_view a, std::u32string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<std::size_t> row(b.size() + 1);
  std::iota(row.begin(), row.end(), std::size_t{0});
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      const std::size_t substitute = diag + (a[i - 1] == b[j - 1] ? 0 : 1);
      row[j] = std::min({up + 1, row[j - 1] + 1, substitute});
      diag = up;
    }
  }
  return row[b.size()];
}

std::size_t levenshtein(std::string_view a, std::string_view b) {
  return levenshtein(decode_utf8(a), decode_utf8(b));
}

double anls_item(std::string_view pred, std::string_view gold, double tau) {
  if (!(tau > 0.0 && tau < 1.0)) throw Error(ErrorCode::InvalidArgument, "tau must lie in (0, 1)");
  const auto p = decode_utf8(pred);
  const auto g = decode_utf8(gold);
  const std::size_t longest = std::max(p.size(), g.size());
  if (longest == 0) return 1.0;
  const double nl = static_cast<double>(levenshtein(p, g)) / static_cast<double>(longest);
  return nl < tau ? 1.0 - nl : 0.0;
}

ScoreReport score(const std::vector<Prediction>& predictions, const std::vector<GoldAnswer>& gold,
                  double tau, ExecPolicy policy) {
  if (!(tau > 0.0 && tau < 1.0)) throw Error(ErrorCode::InvalidArgument, "tau must lie in (0, 1)");
  std::unordered_map<std::string_view, const Prediction*> by_id;
  by_id.reserve(predictions.size());
  for (const auto& p : predictions) {
    if (!by_id.emplace(p.qa_id, &p).second) {
      throw Error(ErrorCode::DuplicatePrediction, "duplicate prediction for qa_id '" + p.qa_id + "'");
    }
  }
  std::vector<const GoldAnswer*> order;
  order.reserve(gold.size());
  std::unordered_set<std::string_view> gold_ids;
  for (const auto& g : gold) {
    if (!gold_ids.insert(g.qa_id).second) {
      throw Error(ErrorCode::DuplicateQaId, "duplicate gold qa_id '" + g.qa_id + "'");
    }
    order.push_back(&g);
  }
  std::sort(order.begin(), order.end(), [](auto* a, auto* b) { return a->qa_id < b->qa_id; });

  ScoreReport report;
  report.tau = tau;
  report.n_items = order.size();
  report.per_item.resize(order.size());
  parallel_for(order.size(), policy, [&](std::size_t i) {
    const GoldAnswer& g = *order[i];
    ItemScore& item = report.per_item[i];
    item.qa_id = g.qa_id;
    const auto it = by_id.find(g.qa_id);
    if (it == by_id.end()) {
      item.missing = true;
      return;
    }
    const auto pred = normalize_answer(it->second->prediction);
    const auto ref = normalize_answer(g.answer);
    item.exact = pred == ref;
    item.anls = item.exact ? 1.0 : anls_item(pred, ref, tau);
  });

  double exact_sum = 0.0;
  double anls_sum = 0.0;
  for (const auto& item : report.per_item) {
    exact_sum += item.exact ? 1.0 : 0.0;
    anls_sum += item.anls;
    if (item.missing) report.missing.push_back(item.qa_id);
  }
  if (report.n_items > 0) {
    report.accuracy = exact_sum / static_cast<double>(report.n_items);
    report.anls = anls_sum / static_cast<double>(report.n_items);
  }
  for (const auto& p : predictions) {
    if (!gold_ids.count(p.qa_id)) report.extra.push_back(p.qa_id);
  }
  std::sort(report.extra.begin(), report.extra.end());
  return report;
}

std::vector<Prediction> parse_predictions_jsonl(std::string_view text) {
  std::vector<Prediction> out;
  std::size_t start = 0;
  std::size_t line_no = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const auto line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    auto fail = [&](const std::string& what) {
      throw Error(ErrorCode::SchemaViolation, "line " + std::to_string(line_no) + ": " + what);
    };
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      fail(std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) fail("expected a JSON object");
    const auto id = j.find("qa_id");
    const auto pred = j.find("prediction");
    if (id == j.end()) fail("missing field 'qa_id'");
    if (pred == j.end()) fail("missing field 'prediction'");
    if (!(id->is_string() || id->is_number_integer())) fail("field 'qa_id' must be a string");
    if (!pred->is_string()) fail("field 'prediction' must be a string");
    out.push_back({id->is_string() ? id->get<std::string>() : id->dump(), pred->get<std::string>()});
  }
  return out;
}

std::string summary_line(const ScoreReport& report) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "n=%zu accuracy=%.4f anls=%.4f", report.n_items, report.accuracy, report.anls);
  return buf;
}

std::string report_to_json(const ScoreReport& report) {
  using ojson = nlohmann::ordered_json;
  ojson items = ojson::array();
  for (const auto& item : report.per_item) {
    items.push_back(ojson{{"qa_id", item.qa_id}, {"exact", item.exact}, {"anls", item.anls},
                          {"missing", item.missing}});
  }
  ojson j{{"n_items", report.n_items}, {"accuracy", report.accuracy}, {"anls", report.anls},
          {"tau", report.tau},         {"missing", report.missing},   {"extra", report.extra},
          {"per_item", std::move(items)}};
  return j.dump(2, ' ', false, nlohmann::json::error_handler_t::replace) + "\n";
}

}  // namespace tcqa
