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

#include "factpipe/docretrieval/mentions.h"

#include <fstream>
#include <set>
#include <unordered_set>

#include "factpipe/common/error.h"
#include "factpipe/common/log.h"
#include "json.hpp"

namespace factpipe::docretrieval {
namespace {

using Lexicon = std::unordered_set<std::string_view>;

const Lexicon& determiners() {
  static const Lexicon k{"a", "an", "the", "this", "that", "these", "those", "some", "any", "every", "each",
                         "no", "his", "her", "its", "their", "our", "my", "your", "all", "both", "several",
                         "many", "few", "another", "such"};
  return k;
}

const Lexicon& function_words() {
  static const Lexicon k{
      // prepositions
      "of", "in", "on", "at", "by", "for", "with", "from", "to", "into", "onto", "about", "as", "after",
      "before", "during", "since", "until", "over", "under", "between", "through", "against", "without",
      "within", "across", "among", "near", "than", "via", "per", "like", "upon", "behind", "beside",
      // conjunctions
      "and", "or", "but", "nor", "yet", "so", "if", "because", "while", "whether",
      // pronouns
      "he", "she", "it", "they", "we", "i", "you", "him", "them", "us", "me", "who", "whom", "which", "what",
      "whose", "there", "here",
      // adverbs and negation
      "not", "never", "only", "also", "still", "just", "ever", "always", "once", "already", "very", "too",
      "then", "now", "often", "exclusively", "solely", "primarily"};
  return k;
}

const Lexicon& verbs() {
  static const Lexicon k{
      "is", "are", "was", "were", "be", "been", "being", "am", "has", "have", "had", "having", "do", "does",
      "did", "will", "would", "can", "could", "shall", "should", "may", "might", "must", "wrote", "writes",
      "written", "write", "played", "plays", "play", "starred", "stars", "star", "directed", "directs",
      "released", "born", "died", "dies", "won", "wins", "received", "receives", "lived", "lives", "live",
      "worked", "works", "became", "becomes", "become", "contains", "contain", "contained", "includes",
      "included", "include", "created", "creates", "produced", "produces", "founded", "owns", "owned",
      "appeared", "appears", "sang", "sings", "recorded", "records", "married", "marries", "lost", "loses",
      "made", "makes", "make", "featured", "features", "starts", "started", "began", "begins", "ended",
      "ends", "joined", "joins", "left", "leaves", "published", "publishes", "designed", "designs",
      "built", "builds", "located", "runs", "ran", "held", "holds", "served", "serves", "taught", "teaches",
      "studied", "studies", "visited", "visits", "painted", "paints", "composed", "composes", "invented",
      "invents", "discovered", "discovers", "ignored", "ignores", "beats", "beat", "refused", "refuses",
      "hosted", "hosts", "competed", "competes", "acted", "acts", "signed", "signs", "toured", "tours"};
  return k;
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

bool is_noun_like(const std::string& token) {
  if (!lexicon::is_word_token(token)) return false;
  const std::string l = lower(token);
  return !determiners().count(l) && !function_words().count(l) && !verbs().count(l);
}

// First occurrence of `words` as a contiguous token run.
std::optional<TokenSpan> find_phrase(const lexicon::TokenSeq& claim, const std::string& phrase) {
  const auto words = lexicon::tokenize(phrase);
  if (words.empty() || words.size() > claim.size()) return std::nullopt;
  for (std::size_t i = 0; i + words.size() <= claim.size(); ++i) {
    bool match = true;
    for (std::size_t k = 0; k < words.size() && match; ++k) match = claim[i + k].text == words[k].text;
    if (match) return TokenSpan{i, i + words.size()};
  }
  return std::nullopt;
}

}  // namespace

std::string_view mention_source_name(MentionSource source) {
  switch (source) {
    case MentionSource::kNounPhrase: return "noun_phrase";
    case MentionSource::kBeforeMainVerb: return "before_main_verb";
    case MentionSource::kFullClaim: return "full_claim";
  }
  return "";
}

bool RuleChunker::is_verb(std::string_view token) { return verbs().count(lower(token)) != 0; }

Parse RuleChunker::parse(std::int64_t, const lexicon::TokenSeq& claim) const {
  Parse p;
  for (std::size_t i = 0; i < claim.size(); ++i) {
    if (is_verb(claim[i].text)) {
      p.main_verb = i;
      break;
    }
  }
  std::size_t i = 0;
  while (i < claim.size()) {
    std::size_t start = i;
    std::size_t j = i;
    if (determiners().count(lower(claim[j].text))) ++j;
    const std::size_t nouns_begin = j;
    while (j < claim.size() && is_noun_like(claim[j].text)) ++j;
    if (j > nouns_begin) {
      p.noun_phrases.push_back(TokenSpan{start, j});
      i = j;
    } else {
      i = start + 1;
    }
  }
  return p;
}

PrecomputedParses PrecomputedParses::load(const std::filesystem::path& path, const ParseProvider* fallback) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read parses file " + path.string());
  PrecomputedParses out(fallback);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto j = nlohmann::json::parse(line, nullptr, false);
    const std::string where = path.string() + ":" + std::to_string(line_no);
    if (!j.is_object() || !j.contains("id") || !j["id"].is_number_integer()) {
      throw FormatError(where + ": parse record needs an integer id");
    }
    Entry e;
    Parse spans;
    for (const auto& np : j.value("noun_phrases", nlohmann::json::array())) {
      if (np.is_string()) {
        e.phrase_texts.push_back(np.get<std::string>());
      } else if (np.is_array() && np.size() == 2) {
        spans.noun_phrases.push_back(TokenSpan{np[0].get<std::size_t>(), np[1].get<std::size_t>()});
      } else {
        throw FormatError(where + ": noun phrase must be a string or [begin, end]");
      }
    }
    if (auto mv = j.find("main_verb"); mv != j.end() && !mv->is_null()) {
      if (mv->is_number_integer()) {
        spans.main_verb = mv->get<std::size_t>();
      } else if (mv->is_string()) {
        e.verb_text = mv->get<std::string>();
      }
    }
    // String phrases are resolved against the claim tokens in parse().
    e.spans = std::move(spans);
    out.entries_[j["id"].get<std::int64_t>()] = std::move(e);
  }
  return out;
}

void PrecomputedParses::add(std::int64_t claim_id, std::vector<std::string> noun_phrases,
                            std::optional<std::string> main_verb) {
  Entry e;
  e.phrase_texts = std::move(noun_phrases);
  e.verb_text = std::move(main_verb);
  entries_[claim_id] = std::move(e);
}

void PrecomputedParses::add(std::int64_t claim_id, Parse parse) {
  Entry e;
  e.spans = std::move(parse);
  entries_[claim_id] = std::move(e);
}

Parse PrecomputedParses::parse(std::int64_t claim_id, const lexicon::TokenSeq& claim) const {
  auto it = entries_.find(claim_id);
  if (it == entries_.end()) {
    if (fallback_) return fallback_->parse(claim_id, claim);
    return Parse{};
  }
  const Entry& e = it->second;
  Parse p = e.spans.value_or(Parse{});
  for (const auto& text : e.phrase_texts) {
    if (auto span = find_phrase(claim, text)) {
      p.noun_phrases.push_back(*span);
    } else {
      log::warn("claim ", claim_id, ": noun phrase '", text, "' not found in claim tokens");
    }
  }
  if (e.verb_text) {
    if (auto span = find_phrase(claim, *e.verb_text)) p.main_verb = span->begin;
  }
  return p;
}

std::vector<Mention> extract_mentions(const lexicon::TokenSeq& claim, const Parse& parse) {
  std::vector<Mention> out;
  std::set<std::string> seen;
  auto push = [&](TokenSpan span, MentionSource source) {
    if (span.begin >= span.end || span.end > claim.size()) return;
    std::string text = claim.join(span.begin, span.end);
    if (!seen.insert(text).second) return;
    out.push_back(Mention{std::move(text), span, source});
  };
  for (const auto& np : parse.noun_phrases) push(np, MentionSource::kNounPhrase);
  if (parse.main_verb && *parse.main_verb > 0 && *parse.main_verb <= claim.size()) {
    push(TokenSpan{0, *parse.main_verb}, MentionSource::kBeforeMainVerb);
  }
  std::size_t end = claim.size();
  while (end > 0 && !lexicon::is_word_token(claim[end - 1].text)) --end;
  push(TokenSpan{0, end}, MentionSource::kFullClaim);
  return out;
}

}  // namespace factpipe::docretrieval
