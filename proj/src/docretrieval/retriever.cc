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

#include "factpipe/docretrieval/retriever.h"

#include <algorithm>
#include <set>

#include "factpipe/lexicon/tokenizer.h"

namespace factpipe::docretrieval {

std::vector<std::string> retrieve_documents(const corpus::ArticleStore& store, const corpus::Claim& claim,
                                            const ParseProvider& parser, const RetrievalOptions& options) {
  const auto tokens = lexicon::tokenize(claim.text);
  std::vector<std::string> out;
  if (tokens.empty()) return out;
  std::set<std::string> seen;
  for (const auto& mention : extract_mentions(tokens, parser.parse(claim.id, tokens))) {
    auto found = filter_candidates(tokens, search_candidates(store, options.remote, mention.text, options.k));
    std::stable_sort(found.begin(), found.end(),
                     [](const CandidateTitle& a, const CandidateTitle& b) { return a.rank < b.rank; });
    for (auto& c : found) {
      if (seen.insert(c.title).second) out.push_back(std::move(c.title));
    }
  }
  return out;
}

}  // namespace factpipe::docretrieval
