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

#include "factpipe/eval/metrics.h"

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>
#include <string_view>

#include "factpipe/rte/rte.h"

namespace factpipe::eval {

using corpus::Claim;
using corpus::EvidenceRef;
using corpus::Label;

namespace {

using PredIndex = std::map<std::int64_t, const PredictionRecord*>;

PredIndex index_predictions(const std::vector<PredictionRecord>& preds) {
  PredIndex index;
  for (const auto& p : preds) index.emplace(p.claim_id, &p);
  return index;
}

const PredictionRecord* lookup(const PredIndex& index, std::int64_t id) {
  auto it = index.find(id);
  return it == index.end() ? nullptr : it->second;
}

bool pages_covered(const Claim& claim, const PredictionRecord& pred) {
  const std::set<std::string> predicted(pred.predicted_pages.begin(), pred.predicted_pages.end());
  for (const auto& set : claim.evidence_sets) {
    if (set.empty()) continue;
    if (std::all_of(set.begin(), set.end(), [&](const EvidenceRef& r) { return predicted.count(r.page) != 0; })) {
      return true;
    }
  }
  return false;
}

bool evidence_covered(const Claim& claim, const PredictionRecord& pred, std::size_t cap) {
  const std::size_t n = std::min(cap, pred.predicted_evidence.size());
  const std::set<EvidenceRef> predicted(pred.predicted_evidence.begin(), pred.predicted_evidence.begin() + n);
  for (const auto& set : claim.evidence_sets) {
    if (set.empty()) continue;
    if (std::all_of(set.begin(), set.end(), [&](const EvidenceRef& r) { return predicted.count(r) != 0; })) {
      return true;
    }
  }
  return false;
}

bool label_correct(const Claim& claim, const PredictionRecord* pred) {
  return pred && claim.label && pred->predicted_label && *pred->predicted_label == *claim.label;
}

}  // namespace

Score doc_accuracy(const std::vector<PredictionRecord>& preds, const std::vector<Claim>& gold) {
  const auto index = index_predictions(preds);
  Score s;
  for (const auto& claim : gold) {
    if (!claim.verifiable()) continue;
    ++s.total;
    const auto* pred = lookup(index, claim.id);
    if (pred && pages_covered(claim, *pred)) ++s.hits;
  }
  return s;
}

Score sentence_recall(const std::vector<PredictionRecord>& preds, const std::vector<Claim>& gold) {
  const auto index = index_predictions(preds);
  Score s;
  for (const auto& claim : gold) {
    if (!claim.verifiable()) continue;
    ++s.total;
    const auto* pred = lookup(index, claim.id);
    if (pred && evidence_covered(claim, *pred, pred->predicted_evidence.size())) ++s.hits;
  }
  return s;
}

Score label_accuracy(const std::vector<PredictionRecord>& preds, const std::vector<Claim>& gold) {
  const auto index = index_predictions(preds);
  Score s;
  for (const auto& claim : gold) {
    if (!claim.label) continue;
    ++s.total;
    if (label_correct(claim, lookup(index, claim.id))) ++s.hits;
  }
  return s;
}

Score fever_score(const std::vector<PredictionRecord>& preds, const std::vector<Claim>& gold) {
  const auto index = index_predictions(preds);
  Score s;
  for (const auto& claim : gold) {
    if (!claim.label) continue;
    ++s.total;
    const auto* pred = lookup(index, claim.id);
    if (!label_correct(claim, pred)) continue;
    if (!claim.verifiable() || evidence_covered(claim, *pred, kFeverEvidenceCap)) ++s.hits;
  }
  return s;
}

Score oracle_fever(const std::vector<PredictionRecord>& preds, const std::vector<Claim>& gold) {
  Score s;
  for (std::size_t c = 0; c < gold.size(); ++c) {
    const Claim& claim = gold[c];
    if (!claim.label) continue;
    s.total += 1;
    const PredictionRecord* pred = nullptr;
    for (std::size_t p = 0; p < preds.size() && pred == nullptr; ++p) {
      if (preds[p].claim_id == claim.id) pred = &preds[p];
    }
    if (pred == nullptr || !pred->predicted_label || *pred->predicted_label != *claim.label) continue;
    if (*claim.label == Label::kNotEnoughInfo) {
      s.hits += 1;
      continue;
    }
    std::vector<EvidenceRef> top;
    for (std::size_t i = 0; i < pred->predicted_evidence.size() && i < kFeverEvidenceCap; ++i) {
      top.push_back(pred->predicted_evidence[i]);
    }
    bool point = false;
    for (std::size_t e = 0; e < claim.evidence_sets.size() && !point; ++e) {
      const auto& gold_set = claim.evidence_sets[e];
      if (gold_set.empty()) continue;
      // Some subset of the predictions must equal the gold set as a set.
      for (std::size_t mask = 1; mask < (std::size_t{1} << top.size()) && !point; ++mask) {
        bool subset_in_gold = true;
        for (std::size_t i = 0; i < top.size(); ++i) {
          if (!(mask >> i & 1)) continue;
          bool found = false;
          for (const auto& g : gold_set) found = found || (g == top[i]);
          subset_in_gold = subset_in_gold && found;
        }
        bool gold_in_subset = true;
        for (const auto& g : gold_set) {
          bool found = false;
          for (std::size_t i = 0; i < top.size(); ++i) found = found || ((mask >> i & 1) && top[i] == g);
          gold_in_subset = gold_in_subset && found;
        }
        point = subset_in_gold && gold_in_subset;
      }
    }
    if (point) s.hits += 1;
  }
  return s;
}

MetricsReport evaluate(const std::vector<PredictionRecord>& preds, const std::vector<Claim>& gold) {
  MetricsReport r;
  r.doc_accuracy = doc_accuracy(preds, gold);
  r.sentence_recall = sentence_recall(preds, gold);
  r.label_accuracy = label_accuracy(preds, gold);
  r.fever_score = fever_score(preds, gold);
  const auto index = index_predictions(preds);
  for (const auto& claim : gold) {
    if (!claim.label) continue;
    const auto* pred = lookup(index, claim.id);
    const std::size_t g = rte::label_index(*claim.label);
    if (!pred) ++r.missing_predictions;
    if (pred && pred->predicted_label) {
      ++r.confusion[g][rte::label_index(*pred->predicted_label)];
    } else {
      ++r.confusion[g][3];
    }
    if (!label_correct(claim, pred)) ++r.label_errors;
    if (!claim.verifiable()) continue;
    if (!pred || !pages_covered(claim, *pred)) {
      ++r.document_misses;
    } else if (!evidence_covered(claim, *pred, pred->predicted_evidence.size())) {
      ++r.sentence_misses;
    }
  }
  return r;
}

std::optional<Stage> stage_from_string(std::string_view s) {
  if (s == "doc") return Stage::kDoc;
  if (s == "sent") return Stage::kSentence;
  if (s == "label") return Stage::kLabel;
  if (s == "fever") return Stage::kFever;
  if (s == "all") return Stage::kAll;
  return std::nullopt;
}

namespace {

void row(std::string& out, const char* name, const Score& s) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "%-36s %6.2f  %zu/%zu%s\n", name, 100.0 * s.value(), s.hits, s.total,
                s.empty() ? "  (empty)" : "");
  out += buf;
}

}  // namespace

std::string format_report(const MetricsReport& r, Stage stage) {
  std::string out;
  out += "# doc accuracy and sentence recall count Supported/Refuted claims only\n";
  out += "# sentences used: " + std::to_string(r.sentences_used) + "\n";
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-36s %6s  %s\n", "metric", "value", "hits/total");
  out += buf;
  const bool all = stage == Stage::kAll;
  if (all || stage == Stage::kDoc) row(out, "Document retrieval (accuracy)", r.doc_accuracy);
  if (all || stage == Stage::kSentence) row(out, "Sentence selection (recall)", r.sentence_recall);
  if (all || stage == Stage::kLabel) row(out, "Textual entailment (label accuracy)", r.label_accuracy);
  if (all || stage == Stage::kFever) row(out, "Full pipeline (FEVER score)", r.fever_score);
  if (all) {
    out += "\nfailure counts\n";
    std::snprintf(buf, sizeof buf, "  missing predictions %zu\n  document misses %zu\n  sentence misses %zu\n"
                  "  label errors %zu\n", r.missing_predictions, r.document_misses, r.sentence_misses, r.label_errors);
    out += buf;
    out += "\nconfusion (rows gold, columns predicted)\n";
    std::snprintf(buf, sizeof buf, "  %-16s %9s %9s %9s %9s\n", "", "SUPPORTS", "REFUTES", "NEI", "missing");
    out += buf;
    const char* names[3] = {"SUPPORTS", "REFUTES", "NOT ENOUGH INFO"};
    for (std::size_t g = 0; g < 3; ++g) {
      std::snprintf(buf, sizeof buf, "  %-16s %9zu %9zu %9zu %9zu\n", names[g], r.confusion[g][0], r.confusion[g][1],
                    r.confusion[g][2], r.confusion[g][3]);
      out += buf;
    }
  }
  return out;
}

}  // namespace factpipe::eval
