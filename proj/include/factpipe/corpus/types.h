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

#ifndef FACTPIPE_CORPUS_TYPES_H_
#define FACTPIPE_CORPUS_TYPES_H_

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace factpipe::corpus {

enum class Label { kSupported = 0, kRefuted = 1, kNotEnoughInfo = 2 };

inline constexpr int kNumLabels = 3;

// Dataset spelling: "SUPPORTS", "REFUTES", "NOT ENOUGH INFO".
std::string_view label_to_string(Label label);
// Inverse of label_to_string; nullopt for anything else.
std::optional<Label> label_from_string(std::string_view s);

struct ArticleLine {
  int line_no = 0;
  std::string sentence;
};

// One dump page. lines[i].line_no == i; gaps in the dump numbering are filled
// with empty sentences so gold line numbers stay valid indices.
struct Article {
  std::string id;
  std::string text;
  std::vector<ArticleLine> lines;
};

struct EvidenceRef {
  std::string page;
  int line = 0;

  friend auto operator<=>(const EvidenceRef&, const EvidenceRef&) = default;
  friend bool operator==(const EvidenceRef&, const EvidenceRef&) = default;
};

// Sentences that jointly support or refute a claim, in dataset order.
using EvidenceSet = std::vector<EvidenceRef>;

struct Claim {
  std::int64_t id = 0;
  std::string text;
  std::optional<Label> label;
  // Alternative gold sets; any one suffices. Empty for NotEnoughInfo.
  std::vector<EvidenceSet> evidence_sets;

  bool verifiable() const { return label && *label != Label::kNotEnoughInfo; }
};

// "Down With Love" -> "Down_With_Love". Parentheses and case are kept.
std::string normalize_title(std::string_view title);
// "Alex_Jones_-LRB-radio_host-RRB-" -> "Alex Jones (radio host)".
std::string display_title(std::string_view id);

}  // namespace factpipe::corpus

#endif  // FACTPIPE_CORPUS_TYPES_H_
