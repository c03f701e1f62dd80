// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "tcqa/parallel.hpp"

namespace tcqa {

inline constexpr double kDefaultTau = 0.5;

/// Trims and collapses whitespace. No case or width folding: answers are raw
/// cell values.
std::string normalize_answer(std::string_view s);

/// Unit-cost edit distance over Unicode scalar values.
std::size_t levenshtein(std::u32string_view a, std::u32string_view b);
std::size_t levenshtein(std::string_view a, std::string_view b);

/// 1 - NL when NL < tau, else 0, with NL = distance / longer length (0 when
/// both are empty). Inputs are expected to be normalized already.
/// Throws Error{InvalidArgument} unless 0 < tau < 1.
double anls_item(std::string_view pred, std::string_view gold, double tau = kDefaultTau);

struct Prediction {
  std::string qa_id;
  std::string prediction;
};

struct GoldAnswer {
  std::string qa_id;
  std::string answer;
};

struct ItemScore {
  std::string qa_id;
  bool exact = false;
  double anls = 0.0;
  bool missing = false;

  bool operator==(const ItemScore&) const = default;
};

struct ScoreReport {
  std::size_t n_items = 0;
  double accuracy = 0.0;
  double anls = 0.0;
  double tau = kDefaultTau;
  std::vector<ItemScore> per_item;        // sorted by qa_id
  std::vector<std::string> missing;       // gold items without a prediction
  std::vector<std::string> extra;         // predictions without a gold item

  bool operator==(const ScoreReport&) const = default;
};

/// Scores predictions against gold. Missing predictions score zero, extra
/// ones are listed but not scored; aggregates are taken over qa_id order so
/// the result does not depend on input order.
///
/// Throws Error{DuplicatePrediction} or Error{DuplicateQaId} (gold).
ScoreReport score(const std::vector<Prediction>& predictions, const std::vector<GoldAnswer>& gold,
                  double tau = kDefaultTau, ExecPolicy policy = ExecPolicy::Parallel);

/// Reads `{"qa_id", "prediction"}` lines. Throws Error{SchemaViolation}
/// naming the 1-based line.
std::vector<Prediction> parse_predictions_jsonl(std::string_view text);

/// `n=<N> accuracy=<a> anls=<b>` with four decimals.
std::string summary_line(const ScoreReport& report);
std::string report_to_json(const ScoreReport& report);

}  // namespace tcqa
