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

#ifndef FACTPIPE_DOCRETRIEVAL_SEARCH_H_
#define FACTPIPE_DOCRETRIEVAL_SEARCH_H_

#include <chrono>
#include <cstddef>
#include <memory>
#include <mutex>
#include <semaphore>
#include <string>
#include <string_view>
#include <vector>

#include "factpipe/common/error.h"
#include "factpipe/corpus/article_store.h"
#include "factpipe/lexicon/tokenizer.h"

namespace factpipe::docretrieval {

inline constexpr std::size_t kDefaultSearchResults = 7;

// Raised by a search backend that could not answer (network, HTTP, parse).
class SearchError : public Error {
 public:
  using Error::Error;
};

// Title search over the article collection. Returns page ids, best first.
class SearchBackend {
 public:
  virtual ~SearchBackend() = default;
  virtual std::vector<std::string> search(std::string_view mention, std::size_t k) const = 0;
};

// Number of distinct stemmed mention words that occur in the title.
std::size_t title_overlap(std::string_view mention, std::string_view page_id);

// Sorts page ids by descending title_overlap with `mention`, then shorter id,
// then lexicographically. Ids with zero overlap are dropped.
std::vector<std::string> rank_by_title_overlap(std::string_view mention, std::vector<std::string> ids);

// Offline emulation of title search over the store's title index.
class LocalOverlapSearch : public SearchBackend {
 public:
  explicit LocalOverlapSearch(const corpus::ArticleStore& store) : store_(store) {}
  std::vector<std::string> search(std::string_view mention, std::size_t k) const override;

 private:
  const corpus::ArticleStore& store_;
};

// Token bucket: `rate` requests per second with bursts up to `burst`.
class RateLimiter {
 public:
  using Clock = std::chrono::steady_clock;

  RateLimiter(double rate, double burst);
  // Blocks until a token is available.
  void acquire();
  // Non-blocking variant; returns the wait that acquire() would need.
  Clock::duration reserve(Clock::time_point now);

 private:
  std::mutex mu_;
  double rate_;
  double burst_;
  double tokens_;
  Clock::time_point last_;
};

struct MediaWikiConfig {
  std::string endpoint = "https://en.wikipedia.org/w/api.php";
  std::size_t max_concurrent = 4;
  double requests_per_second = 5.0;
  int timeout_seconds = 10;
};

// Query string for the MediaWiki full-text search endpoint.
std::string mediawiki_query(std::string_view mention, std::size_t k);
// Titles from a list=search JSON response, in response order. Throws
// SearchError on malformed responses.
std::vector<std::string> parse_mediawiki_response(std::string_view body);

// MediaWiki list=search client. Results are normalized to page ids and
// re-ranked by title_overlap on the client. Refuses to run when
// FACTPIPE_OFFLINE=1.
class MediaWikiSearch : public SearchBackend {
 public:
  explicit MediaWikiSearch(MediaWikiConfig config);
  ~MediaWikiSearch() override;
  std::vector<std::string> search(std::string_view mention, std::size_t k) const override;

 private:
  MediaWikiConfig config_;
  mutable RateLimiter limiter_;
  mutable std::counting_semaphore<64> slots_;
};

// True when FACTPIPE_OFFLINE is set to a non-empty value other than "0".
bool offline_mode();

enum class CandidateOrigin { kRemoteSearch, kExactLocal };

std::string_view candidate_origin_name(CandidateOrigin origin);

struct CandidateTitle {
  std::string title;
  // 1-based within one mention's list for its origin.
  int rank = 1;
  CandidateOrigin origin = CandidateOrigin::kRemoteSearch;
};

// Up to k backend results (origin remote_search; the backend is `remote` when
// given, else the local overlap search) plus the exact title hit if it is not
// already listed. A failing remote backend falls back to the local search.
std::vector<CandidateTitle> search_candidates(const corpus::ArticleStore& store, const SearchBackend* remote,
                                              std::string_view mention, std::size_t k);

// Title words with parenthesized parts removed, stemmed, in order.
std::vector<std::string> stripped_title_stems(std::string_view page_id);
// Stemmed word tokens of a claim, in order.
std::vector<std::string> claim_stems(const lexicon::TokenSeq& claim);

// Keeps a candidate iff its stripped, stemmed title is a non-empty contiguous
// run of the stemmed claim words.
std::vector<CandidateTitle> filter_candidates(const lexicon::TokenSeq& claim,
                                              const std::vector<CandidateTitle>& candidates);

}  // namespace factpipe::docretrieval

#endif  // FACTPIPE_DOCRETRIEVAL_SEARCH_H_
