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

#ifndef FACTPIPE_TESTS_SUPPORT_TOY_CORPUS_H_
#define FACTPIPE_TESTS_SUPPORT_TOY_CORPUS_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace factpipe::testing {

// A small synthetic encyclopedia: biographies with templated attribute lines,
// a family of same-named festivals told apart only by a parenthesized
// qualifier, and the pages used by the worked retrieval examples.
struct ToyOptions {
  std::uint64_t seed = 7;
  std::size_t persons = 40;
  std::size_t supported = 20;  // includes festival claims
  std::size_t refuted = 20;
  std::size_t nei = 20;
  std::size_t festival_claims = 3;
  bool example_pages = true;
  std::int64_t first_claim_id = 100;
};

struct ToyCorpus {
  std::vector<std::string> dump_lines;   // wiki-pages records
  std::vector<std::string> claim_lines;  // claim records
};

ToyCorpus make_toy_corpus(const ToyOptions& options = {});

// Writes <dir>/wiki/pages.jsonl and <dir>/claims.jsonl.
void write_toy_corpus(const ToyCorpus& corpus, const std::filesystem::path& dir);

}  // namespace factpipe::testing

#endif  // FACTPIPE_TESTS_SUPPORT_TOY_CORPUS_H_
