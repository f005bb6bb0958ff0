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

#ifndef FACTPIPE_CORPUS_CLAIMS_H_
#define FACTPIPE_CORPUS_CLAIMS_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "factpipe/corpus/article_store.h"
#include "factpipe/corpus/types.h"

namespace factpipe::corpus {

struct ClaimSet {
  std::vector<Claim> claims;
  // One message per rejected record, prefixed with "path:line:".
  std::vector<std::string> rejected;
};

// Parses one claims record: {"id", "claim", "label"?, "evidence"?} where
// evidence is a list of groups of [annotation_id, evidence_id, page, line]
// quadruples. Quadruples with a null page are dropped, and so are groups that
// end up empty. Throws FormatError for an unknown label or a malformed record.
Claim parse_claim_record(std::string_view json_line);

// Reads a line-delimited claims file; malformed records are collected in
// ClaimSet::rejected instead of aborting. Throws IoError if unreadable.
ClaimSet load_claims(const std::filesystem::path& path);

// Evidence references of labeled verifiable claims that do not resolve in
// `store`, formatted "claim <id>: <page>/<line>".
std::vector<std::string> unresolved_evidence(const std::vector<Claim>& claims, const ArticleStore& store);

}  // namespace factpipe::corpus

#endif  // FACTPIPE_CORPUS_CLAIMS_H_
