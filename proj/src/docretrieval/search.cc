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

#include "factpipe/docretrieval/search.h"

#include <algorithm>
#include <cstdlib>
#include <set>
#include <thread>

#include "factpipe/common/log.h"
#include "factpipe/corpus/types.h"
#include "factpipe/lexicon/stemmer.h"
#include "factpipe/lexicon/tokenizer.h"
#include "httplib.h"
#include "json.hpp"

namespace factpipe::docretrieval {
namespace {

std::set<std::string> word_stems(std::string_view text) {
  std::set<std::string> out;
  for (const auto& t : lexicon::tokenize(text).tokens) {
    if (lexicon::is_word_token(t.text)) out.insert(lexicon::stem(t.text));
  }
  return out;
}

std::string percent_encode(std::string_view s) {
  static const char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : s) {
    if ((c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-' || c == '_' ||
        c == '.' || c == '~') {
      out += static_cast<char>(c);
    } else {
      out += '%';
      out += kHex[c >> 4];
      out += kHex[c & 15];
    }
  }
  return out;
}

// "https://host:port/w/api.php" -> {"https://host:port", "/w/api.php"}.
std::pair<std::string, std::string> split_endpoint(const std::string& endpoint) {
  const std::size_t scheme = endpoint.find("://");
  if (scheme == std::string::npos) throw SearchError("endpoint needs a scheme: " + endpoint);
  const std::size_t path = endpoint.find('/', scheme + 3);
  if (path == std::string::npos) return {endpoint, "/"};
  return {endpoint.substr(0, path), endpoint.substr(path)};
}

}  // namespace

std::size_t title_overlap(std::string_view mention, std::string_view page_id) {
  const auto m = word_stems(mention);
  std::size_t n = 0;
  for (const auto& s : corpus::title_stems(page_id)) n += m.count(s);
  return n;
}

std::vector<std::string> rank_by_title_overlap(std::string_view mention, std::vector<std::string> ids) {
  const auto m = word_stems(mention);
  struct Scored {
    std::size_t overlap;
    std::string id;
  };
  std::vector<Scored> scored;
  std::set<std::string> seen;
  for (auto& id : ids) {
    if (!seen.insert(id).second) continue;
    std::size_t n = 0;
    for (const auto& s : corpus::title_stems(id)) n += m.count(s);
    if (n > 0) scored.push_back(Scored{n, std::move(id)});
  }
  std::sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
    if (a.overlap != b.overlap) return a.overlap > b.overlap;
    if (a.id.size() != b.id.size()) return a.id.size() < b.id.size();
    return a.id < b.id;
  });
  std::vector<std::string> out;
  out.reserve(scored.size());
  for (auto& s : scored) out.push_back(std::move(s.id));
  return out;
}

std::vector<std::string> LocalOverlapSearch::search(std::string_view mention, std::size_t k) const {
  std::set<std::string> pool;
  for (const auto& s : word_stems(mention)) {
    const auto& ids = store_.titles().postings(s);
    pool.insert(ids.begin(), ids.end());
  }
  auto ranked = rank_by_title_overlap(mention, {pool.begin(), pool.end()});
  if (ranked.size() > k) ranked.resize(k);
  return ranked;
}

RateLimiter::RateLimiter(double rate, double burst)
    : rate_(rate), burst_(std::max(1.0, burst)), tokens_(std::max(1.0, burst)), last_(Clock::now()) {}

RateLimiter::Clock::duration RateLimiter::reserve(Clock::time_point now) {
  std::lock_guard<std::mutex> lock(mu_);
  if (now > last_) {
    tokens_ = std::min(burst_, tokens_ + rate_ * std::chrono::duration<double>(now - last_).count());
    last_ = now;
  }
  tokens_ -= 1.0;
  if (tokens_ >= 0.0 || rate_ <= 0.0) return Clock::duration::zero();
  return std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(-tokens_ / rate_));
}

void RateLimiter::acquire() {
  const auto wait = reserve(Clock::now());
  if (wait > Clock::duration::zero()) std::this_thread::sleep_for(wait);
}

std::string mediawiki_query(std::string_view mention, std::size_t k) {
  return "action=query&list=search&srsearch=" + percent_encode(mention) + "&srlimit=" + std::to_string(k) +
         "&format=json";
}

std::vector<std::string> parse_mediawiki_response(std::string_view body) {
  auto j = nlohmann::json::parse(body, nullptr, false);
  if (j.is_discarded()) throw SearchError("search response is not JSON");
  if (j.contains("error")) throw SearchError("search API error: " + j["error"].dump());
  const auto* hits = j.contains("query") ? &j["query"] : nullptr;
  if (!hits || !hits->contains("search") || !(*hits)["search"].is_array()) {
    throw SearchError("search response lacks query.search");
  }
  std::vector<std::string> titles;
  for (const auto& hit : (*hits)["search"]) {
    if (hit.contains("title") && hit["title"].is_string()) titles.push_back(hit["title"].get<std::string>());
  }
  return titles;
}

bool offline_mode() {
  const char* v = std::getenv("FACTPIPE_OFFLINE");
  return v && *v && std::string_view(v) != "0";
}

MediaWikiSearch::MediaWikiSearch(MediaWikiConfig config)
    : config_(std::move(config)),
      limiter_(config_.requests_per_second, static_cast<double>(config_.max_concurrent)),
      slots_(static_cast<std::ptrdiff_t>(std::clamp<std::size_t>(config_.max_concurrent, 1, 64))) {}

MediaWikiSearch::~MediaWikiSearch() = default;

std::vector<std::string> MediaWikiSearch::search(std::string_view mention, std::size_t k) const {
  if (offline_mode()) throw SearchError("network use forbidden by FACTPIPE_OFFLINE");
  auto [base, path] = split_endpoint(config_.endpoint);
  limiter_.acquire();
  slots_.acquire();
  httplib::Result res;
  try {
    httplib::Client client(base);
    client.set_connection_timeout(config_.timeout_seconds);
    client.set_read_timeout(config_.timeout_seconds);
    client.set_follow_location(true);
    res = client.Get(path + "?" + mediawiki_query(mention, k));
  } catch (const std::exception& e) {
    slots_.release();
    throw SearchError(std::string("search request failed: ") + e.what());
  }
  slots_.release();
  if (!res) throw SearchError("search request failed: " + httplib::to_string(res.error()));
  if (res->status != 200) throw SearchError("search request returned HTTP " + std::to_string(res->status));
  std::vector<std::string> ids;
  for (const auto& title : parse_mediawiki_response(res->body)) ids.push_back(corpus::normalize_title(title));
  auto ranked = rank_by_title_overlap(mention, std::move(ids));
  if (ranked.size() > k) ranked.resize(k);
  return ranked;
}

std::string_view candidate_origin_name(CandidateOrigin origin) {
  return origin == CandidateOrigin::kRemoteSearch ? "remote_search" : "exact_local";
}

std::vector<CandidateTitle> search_candidates(const corpus::ArticleStore& store, const SearchBackend* remote,
                                              std::string_view mention, std::size_t k) {
  if (k == 0) throw Error("search_candidates: k must be at least 1");
  LocalOverlapSearch local(store);
  std::vector<std::string> hits;
  if (remote) {
    try {
      hits = remote->search(mention, k);
    } catch (const SearchError& e) {
      log::warn("remote search for '", mention, "' failed (", e.what(), "); using local title search");
      hits = local.search(mention, k);
    }
  } else {
    hits = local.search(mention, k);
  }
  if (hits.size() > k) hits.resize(k);
  std::vector<CandidateTitle> out;
  for (std::size_t i = 0; i < hits.size(); ++i) {
    out.push_back(CandidateTitle{std::move(hits[i]), static_cast<int>(i + 1), CandidateOrigin::kRemoteSearch});
  }
  if (auto exact = store.exact_title_lookup(mention)) {
    const bool listed = std::any_of(out.begin(), out.end(), [&](const auto& c) { return c.title == *exact; });
    if (!listed) out.push_back(CandidateTitle{*exact, 1, CandidateOrigin::kExactLocal});
  }
  return out;
}

std::vector<std::string> stripped_title_stems(std::string_view page_id) {
  const std::string title = corpus::display_title(page_id);
  std::string kept;
  int depth = 0;
  for (char c : title) {
    if (c == '(') {
      ++depth;
    } else if (c == ')') {
      if (depth > 0) --depth;
    } else if (depth == 0) {
      kept += c;
    }
  }
  std::vector<std::string> out;
  for (const auto& t : lexicon::tokenize(kept).tokens) {
    if (lexicon::is_word_token(t.text)) out.push_back(lexicon::stem(t.text));
  }
  return out;
}

std::vector<std::string> claim_stems(const lexicon::TokenSeq& claim) {
  std::vector<std::string> out;
  for (const auto& t : claim.tokens) {
    if (lexicon::is_word_token(t.text)) out.push_back(lexicon::stem(t.text));
  }
  return out;
}

std::vector<CandidateTitle> filter_candidates(const lexicon::TokenSeq& claim,
                                              const std::vector<CandidateTitle>& candidates) {
  const auto words = claim_stems(claim);
  std::vector<CandidateTitle> kept;
  for (const auto& c : candidates) {
    const auto title = stripped_title_stems(c.title);
    if (title.empty() || title.size() > words.size()) continue;
    if (std::search(words.begin(), words.end(), title.begin(), title.end()) != words.end()) kept.push_back(c);
  }
  return kept;
}

}  // namespace factpipe::docretrieval
