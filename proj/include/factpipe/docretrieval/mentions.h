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

#ifndef FACTPIPE_DOCRETRIEVAL_MENTIONS_H_
#define FACTPIPE_DOCRETRIEVAL_MENTIONS_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "factpipe/lexicon/tokenizer.h"

namespace factpipe::docretrieval {

enum class MentionSource { kNounPhrase, kBeforeMainVerb, kFullClaim };

std::string_view mention_source_name(MentionSource source);

struct TokenSpan {
  std::size_t begin = 0;
  std::size_t end = 0;  // exclusive

  friend bool operator==(const TokenSpan&, const TokenSpan&) = default;
};

struct Mention {
  // Claim tokens over `span`, joined with single spaces.
  std::string text;
  TokenSpan span;
  MentionSource source = MentionSource::kNounPhrase;
};

// Syntactic analysis a mention extractor needs from a claim.
struct Parse {
  std::vector<TokenSpan> noun_phrases;
  std::optional<std::size_t> main_verb;
};

class ParseProvider {
 public:
  virtual ~ParseProvider() = default;
  virtual Parse parse(std::int64_t claim_id, const lexicon::TokenSeq& claim) const = 0;
};

// Closed-class-lexicon chunker: a noun phrase is an optional determiner
// followed by a maximal run of word tokens that are not determiners,
// prepositions, conjunctions, pronouns, adverbs or verbs. The main verb is the
// first token found in the verb lexicon.
class RuleChunker : public ParseProvider {
 public:
  Parse parse(std::int64_t claim_id, const lexicon::TokenSeq& claim) const override;

  static bool is_verb(std::string_view token);
};

// Parses supplied ahead of time (e.g. by an external constituency parser),
// keyed by claim id. Claims without an entry go to `fallback`.
//
// File format, one JSON object per line:
//   {"id": 7, "noun_phrases": [[0, 2], "a 2003 comedy film"], "main_verb": 3}
// Noun phrases are token spans or strings matched against the claim tokens;
// main_verb is a token index, a token string, or null.
class PrecomputedParses : public ParseProvider {
 public:
  explicit PrecomputedParses(const ParseProvider* fallback) : fallback_(fallback) {}

  static PrecomputedParses load(const std::filesystem::path& path, const ParseProvider* fallback);

  void add(std::int64_t claim_id, std::vector<std::string> noun_phrases, std::optional<std::string> main_verb);
  void add(std::int64_t claim_id, Parse parse);

  Parse parse(std::int64_t claim_id, const lexicon::TokenSeq& claim) const override;

 private:
  struct Entry {
    std::optional<Parse> spans;
    std::vector<std::string> phrase_texts;
    std::optional<std::string> verb_text;
  };
  const ParseProvider* fallback_;
  std::map<std::int64_t, Entry> entries_;
};

// Union of (a) every noun phrase, (b) the tokens strictly before the main verb
// when that prefix is non-empty, and (c) the whole claim without trailing
// punctuation. Duplicate texts keep their first occurrence; spans outside the
// claim are ignored.
std::vector<Mention> extract_mentions(const lexicon::TokenSeq& claim, const Parse& parse);

}  // namespace factpipe::docretrieval

#endif  // FACTPIPE_DOCRETRIEVAL_MENTIONS_H_
