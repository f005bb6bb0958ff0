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

#ifndef FACTPIPE_DOCRETRIEVAL_RETRIEVER_H_
#define FACTPIPE_DOCRETRIEVAL_RETRIEVER_H_

#include <cstddef>
#include <string>
#include <vector>

#include "factpipe/corpus/article_store.h"
#include "factpipe/corpus/types.h"
#include "factpipe/docretrieval/mentions.h"
#include "factpipe/docretrieval/search.h"

namespace factpipe::docretrieval {

struct RetrievalOptions {
  std::size_t k = kDefaultSearchResults;
  // Null selects the local overlap search.
  const SearchBackend* remote = nullptr;
};

// Filtered candidates of every mention, deduplicated. Ordered by the first
// mention that produced a page, then by rank within that mention.
std::vector<std::string> retrieve_documents(const corpus::ArticleStore& store, const corpus::Claim& claim,
                                            const ParseProvider& parser, const RetrievalOptions& options = {});

}  // namespace factpipe::docretrieval

#endif  // FACTPIPE_DOCRETRIEVAL_RETRIEVER_H_
