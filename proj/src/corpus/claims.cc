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

#include "factpipe/corpus/claims.h"

#include <fstream>

#include "factpipe/common/error.h"
#include "factpipe/common/log.h"
#include "json.hpp"

namespace factpipe::corpus {
using nlohmann::json;

Claim parse_claim_record(std::string_view json_line) {
  json j = json::parse(json_line, nullptr, /*allow_exceptions=*/false);
  if (!j.is_object()) throw FormatError("record is not a JSON object");
  Claim c;
  auto id = j.find("id");
  if (id == j.end() || !id->is_number_integer()) throw FormatError("record has no integer id");
  c.id = id->get<std::int64_t>();
  auto text = j.find("claim");
  if (text == j.end() || !text->is_string()) throw FormatError("claim " + std::to_string(c.id) + " has no text");
  c.text = text->get<std::string>();
  if (auto label = j.find("label"); label != j.end() && !label->is_null()) {
    if (!label->is_string()) throw FormatError("claim " + std::to_string(c.id) + ": label is not a string");
    c.label = label_from_string(label->get<std::string>());
    if (!c.label) {
      throw FormatError("claim " + std::to_string(c.id) + ": unknown label '" + label->get<std::string>() + "'");
    }
  }
  auto evidence = j.find("evidence");
  if (evidence == j.end() || evidence->is_null()) return c;
  if (!evidence->is_array()) throw FormatError("claim " + std::to_string(c.id) + ": evidence is not a list");
  for (const auto& group : *evidence) {
    if (!group.is_array()) throw FormatError("claim " + std::to_string(c.id) + ": evidence group is not a list");
    EvidenceSet set;
    for (const auto& quad : group) {
      if (!quad.is_array() || quad.size() != 4) {
        throw FormatError("claim " + std::to_string(c.id) + ": evidence entry is not a quadruple");
      }
      if (quad[2].is_null()) continue;
      if (!quad[2].is_string() || !quad[3].is_number_integer()) {
        throw FormatError("claim " + std::to_string(c.id) + ": evidence page/line malformed");
      }
      set.push_back(EvidenceRef{quad[2].get<std::string>(), quad[3].get<int>()});
    }
    if (!set.empty()) c.evidence_sets.push_back(std::move(set));
  }
  return c;
}

ClaimSet load_claims(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read claims file " + path.string());
  ClaimSet out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      out.claims.push_back(parse_claim_record(line));
    } catch (const FormatError& e) {
      out.rejected.push_back(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  for (const auto& r : out.rejected) log::warn("rejected claim record ", r);
  return out;
}

std::vector<std::string> unresolved_evidence(const std::vector<Claim>& claims, const ArticleStore& store) {
  std::vector<std::string> problems;
  for (const Claim& c : claims) {
    if (!c.verifiable()) continue;
    if (c.evidence_sets.empty()) {
      problems.push_back("claim " + std::to_string(c.id) + ": labeled verifiable but has no evidence");
    }
    for (const auto& set : c.evidence_sets) {
      for (const auto& ref : set) {
        if (!store.find_line(ref.page, ref.line)) {
          problems.push_back("claim " + std::to_string(c.id) + ": " + ref.page + "/" + std::to_string(ref.line));
        }
      }
    }
  }
  return problems;
}

}  // namespace factpipe::corpus
