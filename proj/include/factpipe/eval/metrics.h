// Copyright 2026 The factpipe Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FACTPIPE_EVAL_METRICS_H_
#define FACTPIPE_EVAL_METRICS_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "factpipe/corpus/types.h"

namespace factpipe::eval {

inline constexpr std::size_t kFeverEvidenceCap = 5;

struct PredictionRecord {
  std::int64_t claim_id = 0;
  std::vector<std::string> predicted_pages;
  std::vector<corpus::EvidenceRef> predicted_evidence;
  std::optional<corpus::Label> predicted_label;
};

// hits / total; 0 with empty() set when nothing was counted.
struct Score {
  std::size_t hits = 0;
  std::size_t total = 0;

  bool empty() const { return total == 0; }
  double value() const { return total == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(total); }
};

// Over Supported/Refuted claims: some gold set's pages all predicted.
Score doc_accuracy(const std::vector<PredictionRecord>& preds, const std::vector<corpus::Claim>& gold);
// Over Supported/Refuted claims: some gold set inside the predicted evidence.
Score sentence_recall(const std::vector<PredictionRecord>& preds, const std::vector<corpus::Claim>& gold);
// Over all labeled claims.
Score label_accuracy(const std::vector<PredictionRecord>& preds, const std::vector<corpus::Claim>& gold);
// Correct label and, for verifiable claims, a gold set within the first five
// predicted sentences.
Score fever_score(const std::vector<PredictionRecord>& preds, const std::vector<corpus::Claim>& gold);

// Brute-force FEVER scorer for tests: linear scans and explicit subset
// enumeration over the capped predicted evidence.
Score oracle_fever(const std::vector<PredictionRecord>& preds, const std::vector<corpus::Claim>& gold);

struct MetricsReport {
  Score doc_accuracy;
  Score sentence_recall;
  Score label_accuracy;
  Score fever_score;
  // confusion[gold][predicted]; column 3 counts claims without a prediction.
  std::array<std::array<std::size_t, 4>, 3> confusion{};
  std::size_t missing_predictions = 0;
  std::size_t document_misses = 0;   // verifiable, no gold page set retrieved
  std::size_t sentence_misses = 0;   // pages retrieved, no gold set selected
  std::size_t label_errors = 0;      // wrong or missing label
  std::size_t sentences_used = 5;
};

MetricsReport evaluate(const std::vector<PredictionRecord>& preds, const std::vector<corpus::Claim>& gold);

enum class Stage { kDoc, kSentence, kLabel, kFever, kAll };
std::optional<Stage> stage_from_string(std::string_view s);

// Fixed-width table: metric, value in percent with 2 decimals, hits/total.
std::string format_report(const MetricsReport& report, Stage stage = Stage::kAll);

}  // namespace factpipe::eval

#endif  // FACTPIPE_EVAL_METRICS_H_
