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


#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "catch_amalgamated.hpp"
#include "factpipe/common/rng.h"
#include "factpipe/corpus/article_store.h"
#include "factpipe/docretrieval/mentions.h"
#include "factpipe/docretrieval/retriever.h"
#include "factpipe/docretrieval/search.h"
#include "factpipe/lexicon/tokenizer.h"
#include "fixtures.h"
#include "httplib.h"

namespace factpipe::docretrieval {
namespace {

using lexicon::tokenize;

std::vector<std::string> mention_texts(const std::vector<Mention>& mentions) {
  std::vector<std::string> out;
  for (const auto& m : mentions) out.push_back(m.text);
  return out;
}

bool contains(const std::vector<std::string>& xs, const std::string& x) {
  return std::find(xs.begin(), xs.end(), x) != xs.end();
}

corpus::ArticleStore store_with(const testing::TempDir& dir, const std::vector<std::string>& ids) {
  std::ofstream out(dir / "dump.jsonl");
  for (const auto& id : ids) out << R"({"id":")" << id << R"(","text":"x","lines":"0\tx"})" << "\n";
  out.close();
  return corpus::ArticleStore::ingest(dir / "dump.jsonl");
}

std::vector<std::string> titles_of(const std::vector<CandidateTitle>& cands) {
  std::vector<std::string> out;
  for (const auto& c : cands) out.push_back(c.title);
  return out;
}

TEST_CASE("Down With Love mentions include the entity before the main verb", "[docretrieval][examples]") {
  auto claim = tokenize("Down With Love is a 2003 comedy film.");
  Parse parse;
  parse.noun_phrases = {{4, 8}, {2, 3}};  // "a 2003 comedy film", "Love"
  parse.main_verb = 3;
  auto mentions = extract_mentions(claim, parse);
  CHECK(mention_texts(mentions) == std::vector<std::string>{"a 2003 comedy film", "Love", "Down With Love",
                                                            "Down With Love is a 2003 comedy film"});
  CHECK(mentions[2].source == MentionSource::kBeforeMainVerb);
  CHECK(mentions[3].source == MentionSource::kFullClaim);
}

TEST_CASE("rule chunker finds the same pre-verb entity", "[docretrieval][examples]") {
  auto claim = tokenize("Down With Love is a 2003 comedy film.");
  Parse parse = RuleChunker().parse(0, claim);
  REQUIRE(parse.main_verb.has_value());
  CHECK(*parse.main_verb == 3);
  auto texts = mention_texts(extract_mentions(claim, parse));
  CHECK(contains(texts, "Down With Love"));
  CHECK(contains(texts, "Down With Love is a 2003 comedy film"));
}

TEST_CASE("mention extraction edge cases", "[docretrieval][mentions]") {
  auto no_verb = tokenize("Homer Hickam, an author.");
  Parse p1;
  p1.noun_phrases = {{0, 2}};
  CHECK(mention_texts(extract_mentions(no_verb, p1)) ==
        std::vector<std::string>{"Homer Hickam", "Homer Hickam , an author"});

  auto verb_first = tokenize("Is Love a film?");
  Parse p2;
  p2.main_verb = 0;
  CHECK(mention_texts(extract_mentions(verb_first, p2)) == std::vector<std::string>{"Is Love a film"});

  Parse p3;
  p3.noun_phrases = {{0, 2}, {0, 2}};
  p3.main_verb = 2;
  auto claim = tokenize("Alex Jones is apolitical.");
  CHECK(mention_texts(extract_mentions(claim, p3)) ==
        std::vector<std::string>{"Alex Jones", "Alex Jones is apolitical"});
}

TEST_CASE("the full claim is always a mention", "[docretrieval][mentions]") {
  auto world = testing::build_toy_world();
  RuleChunker chunker;
  for (const auto& c : world.claims) {
    auto claim = tokenize(c.text);
    auto mentions = extract_mentions(claim, chunker.parse(c.id, claim));
    std::string full = c.text;
    while (!full.empty() && (full.back() == '.' || full.back() == '!' || full.back() == '?')) full.pop_back();
    CHECK(contains(mention_texts(mentions), tokenize(full).join(0, tokenize(full).size())));
  }
}

TEST_CASE("precomputed parses override the fallback", "[docretrieval][mentions]") {
  testing::TempDir dir;
  std::ofstream(dir / "parses.jsonl") << R"({"id":5,"noun_phrases":["Down With Love"],"main_verb":"is"})" << "\n";
  RuleChunker chunker;
  PrecomputedParses parses = PrecomputedParses::load(dir / "parses.jsonl", &chunker);
  auto claim = tokenize("Down With Love is a 2003 comedy film.");
  Parse p = parses.parse(5, claim);
  REQUIRE(p.noun_phrases.size() == 1);
  CHECK(p.noun_phrases[0] == TokenSpan{0, 3});
  CHECK(p.main_verb == 3);
  Parse fallback = parses.parse(6, claim);
  CHECK(fallback.main_verb == chunker.parse(6, claim).main_verb);
}

TEST_CASE("overlap search examples", "[docretrieval][search]") {
  testing::TempDir dir;
  auto store = store_with(dir, {"Down_With_Love", "Love", "Alex_Jones_(radio_host)", "Alex_Jones_(footballer)"});
  auto down = search_candidates(store, nullptr, "Down With Love", 7);
  REQUIRE_FALSE(down.empty());
  CHECK(down[0].title == "Down_With_Love");
  CHECK(title_overlap("Down With Love", "Down_With_Love") == 3);
  CHECK(title_overlap("Down With Love", "Love") == 1);

  // Not an exact title, found by overlap.
  CHECK_FALSE(store.exact_title_lookup("Alex Jones").has_value());
  auto alex = titles_of(search_candidates(store, nullptr, "Alex Jones", 7));
  CHECK(contains(alex, "Alex_Jones_(radio_host)"));

  auto one = search_candidates(store, nullptr, "Down With Love", 1);
  CHECK(titles_of(one) == std::vector<std::string>{"Down_With_Love"});
  auto love = search_candidates(store, nullptr, "Love", 1);
  REQUIRE(love.size() == 1);
  CHECK(love[0].title == "Love");  // shorter title wins the tie

  CHECK_THROWS(search_candidates(store, nullptr, "Love", 0));
}

TEST_CASE("exact hits are unioned after the k cutoff", "[docretrieval][search]") {
  testing::TempDir dir;
  auto store = store_with(dir, {"Love", "Love_Story", "Love_Actually", "Love_(film)"});
  auto cands = search_candidates(store, nullptr, "Love Story", 1);
  REQUIRE(cands.size() == 1);
  CHECK(cands[0].title == "Love_Story");
  CHECK(cands[0].origin == CandidateOrigin::kRemoteSearch);

  auto love = search_candidates(store, nullptr, "Love", 1);
  // "Love" is the single best result and also the exact hit: listed once.
  CHECK(titles_of(love) == std::vector<std::string>{"Love"});

  class Fixed : public SearchBackend {
   public:
    std::vector<std::string> search(std::string_view, std::size_t) const override { return {"Love_Actually"}; }
  } fixed;
  auto merged = search_candidates(store, &fixed, "Love Story", 7);
  REQUIRE(merged.size() == 2);
  CHECK(merged[0].title == "Love_Actually");
  CHECK(merged[1].title == "Love_Story");
  CHECK(merged[1].origin == CandidateOrigin::kExactLocal);
  CHECK(merged[1].rank == 1);
}

TEST_CASE("filtering keeps Alex Jones and discards Homer Hickam", "[docretrieval][examples]") {
  auto alex = filter_candidates(tokenize("Alex Jones is apolitical."), {{"Alex_Jones_(radio_host)"}});
  CHECK(titles_of(alex) == std::vector<std::string>{"Alex_Jones_(radio_host)"});

  auto homer = filter_candidates(tokenize("Homer Hickman wrote some historical fiction novels."), {{"Homer_Hickam"}});
  CHECK(homer.empty());

  CHECK(stripped_title_stems("Alex_Jones_(radio_host)") == std::vector<std::string>{"alex", "jone"});
  // contiguity: scattered words are not enough
  CHECK(filter_candidates(tokenize("Love is what it is, actually."), {{"Love_Actually"}}).empty());
}

TEST_CASE("a title equal to a mention is always kept", "[docretrieval][property]") {
  auto world = testing::build_toy_world();
  Rng rng(17);
  for (const auto& c : world.claims) {
    auto claim = tokenize(c.text);
    std::vector<std::size_t> words;
    for (std::size_t i = 0; i < claim.size(); ++i)
      if (lexicon::is_word_token(claim[i].text)) words.push_back(i);
    for (int trial = 0; trial < 5; ++trial) {
      const std::size_t b = rng.below(words.size());
      const std::size_t e = b + 1 + rng.below(words.size() - b);
      std::string title;
      for (std::size_t i = b; i < e; ++i) title += (title.empty() ? "" : "_") + claim[words[i]].text;
      INFO(c.text << " / " << title);
      CHECK(filter_candidates(claim, {{title}}).size() == 1);
    }
  }
}

TEST_CASE("retrieval finds Down With Love", "[docretrieval][retrieve]") {
  auto world = testing::build_toy_world();
  RuleChunker chunker;
  corpus::Claim claim;
  claim.text = "Down With Love is a 2003 comedy film.";
  auto pages = retrieve_documents(world.store, claim, chunker);
  CHECK(contains(pages, "Down_With_Love"));

  corpus::Claim nothing;
  nothing.text = "Zyzzyva quux blorp.";
  CHECK(retrieve_documents(world.store, nothing, chunker).empty());

  corpus::Claim alex;
  alex.text = "Alex Jones is apolitical.";
  CHECK(contains(retrieve_documents(world.store, alex, chunker), "Alex_Jones_(radio_host)"));
  corpus::Claim homer;
  homer.text = "Homer Hickman wrote some historical fiction novels.";
  CHECK_FALSE(contains(retrieve_documents(world.store, homer, chunker), "Homer_Hickam"));
}

TEST_CASE("retrieved sets grow with k", "[docretrieval][property]") {
  auto world = testing::build_toy_world();
  RuleChunker chunker;
  for (const auto& c : world.claims) {
    std::vector<std::string> previous;
    for (std::size_t k = 1; k <= 10; ++k) {
      auto pages = retrieve_documents(world.store, c, chunker, {k, nullptr});
      std::set<std::string> now(pages.begin(), pages.end());
      CHECK(now.size() == pages.size());
      for (const auto& p : previous) CHECK(now.count(p) == 1);
      previous = pages;
    }
  }
}

TEST_CASE("rate limiter", "[docretrieval][remote]") {
  RateLimiter limiter(2.0, 1.0);
  auto t0 = RateLimiter::Clock::now();
  CHECK(limiter.reserve(t0) == RateLimiter::Clock::duration::zero());
  auto wait = std::chrono::duration<double>(limiter.reserve(t0)).count();
  CHECK(wait == Catch::Approx(0.5).margin(0.05));
  // after the wait the bucket has refilled
  CHECK(limiter.reserve(t0 + std::chrono::seconds(2)) == RateLimiter::Clock::duration::zero());

  RateLimiter burst(1.0, 3.0);
  auto t1 = RateLimiter::Clock::now();
  for (int i = 0; i < 3; ++i) CHECK(burst.reserve(t1) == RateLimiter::Clock::duration::zero());
  CHECK(burst.reserve(t1) > RateLimiter::Clock::duration::zero());
}

TEST_CASE("MediaWiki query and response handling", "[docretrieval][remote]") {
  CHECK(mediawiki_query("Alex Jones (radio host)", 7) ==
        "action=query&list=search&srsearch=Alex%20Jones%20%28radio%20host%29&srlimit=7&format=json");
  auto titles = parse_mediawiki_response(
      R"({"batchcomplete":"","query":{"searchinfo":{"totalhits":2},"search":[{"ns":0,"title":"Down with Love"},{"ns":0,"title":"Love"}]}})");
  CHECK(titles == std::vector<std::string>{"Down with Love", "Love"});
  CHECK_THROWS_AS(parse_mediawiki_response("<html>"), SearchError);
  CHECK_THROWS_AS(parse_mediawiki_response(R"({"error":{"code":"x"}})"), SearchError);
  CHECK_THROWS_AS(parse_mediawiki_response(R"({"query":{}})"), SearchError);
}

TEST_CASE("offline mode refuses remote search and retrieval falls back", "[docretrieval][remote]") {
  REQUIRE(offline_mode());  // ctest sets FACTPIPE_OFFLINE=1
  MediaWikiSearch remote(MediaWikiConfig{});
  CHECK_THROWS_AS(remote.search("Love", 3), SearchError);
  testing::TempDir dir;
  auto store = store_with(dir, {"Down_With_Love", "Love"});
  auto cands = search_candidates(store, &remote, "Down With Love", 7);
  CHECK(titles_of(cands) == titles_of(search_candidates(store, nullptr, "Down With Love", 7)));
}

// Serves canned list=search responses on 127.0.0.1.
class LoopbackServer {
 public:
  explicit LoopbackServer(int status) {
    server_.Get("/w/api.php", [this, status](const httplib::Request& req, httplib::Response& res) {
      last_query_ = req.get_param_value("srsearch");
      res.status = status;
      res.set_content(
          R"({"query":{"search":[{"title":"Love"},{"title":"Down With Love"},{"title":"Unrelated page"}]}})",
          "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~LoopbackServer() {
    server_.stop();
    thread_.join();
  }
  std::string endpoint() const { return "http://127.0.0.1:" + std::to_string(port_) + "/w/api.php"; }
  std::string last_query() const { return last_query_; }

 private:
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
  std::string last_query_;
};

class OnlineScope {
 public:
  OnlineScope() { setenv("FACTPIPE_OFFLINE", "0", 1); }
  ~OnlineScope() { setenv("FACTPIPE_OFFLINE", "1", 1); }
};

TEST_CASE("MediaWiki client against a loopback server", "[docretrieval][remote]") {
  OnlineScope online;
  LoopbackServer server(200);
  MediaWikiConfig config;
  config.endpoint = server.endpoint();
  config.requests_per_second = 100.0;
  config.timeout_seconds = 5;
  MediaWikiSearch remote(config);
  auto hits = remote.search("Down With Love", 7);
  CHECK(server.last_query() == "Down With Love");
  // normalized, re-ranked by overlap, zero-overlap titles dropped
  CHECK(hits == std::vector<std::string>{"Down_With_Love", "Love"});
  CHECK(remote.search("Down With Love", 1) == std::vector<std::string>{"Down_With_Love"});
}

TEST_CASE("server errors fall back to local search", "[docretrieval][remote]") {
  OnlineScope online;
  LoopbackServer server(503);
  MediaWikiConfig config;
  config.endpoint = server.endpoint();
  config.timeout_seconds = 5;
  MediaWikiSearch remote(config);
  CHECK_THROWS_AS(remote.search("Love", 3), SearchError);
  testing::TempDir dir;
  auto store = store_with(dir, {"Down_With_Love", "Love_Story"});
  auto cands = search_candidates(store, &remote, "Love Story", 7);
  CHECK(titles_of(cands) == std::vector<std::string>{"Love_Story", "Down_With_Love"});
}

}  // namespace
}  // namespace factpipe::docretrieval
