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

#include "factpipe/cli/records.h"

#include <fstream>

#include "factpipe/common/error.h"

namespace factpipe::cli {

std::vector<Record> read_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path.string());
  std::vector<Record> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    Record r = Record::parse(line, nullptr, false);
    if (r.is_discarded() || !r.is_object()) {
      throw FormatError(path.string() + ":" + std::to_string(line_no) + ": not a JSON object");
    }
    out.push_back(std::move(r));
  }
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const auto tmp = std::filesystem::path(path.string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out << text;
    if (!out) throw IoError("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

void write_jsonl(const std::filesystem::path& path, const std::vector<Record>& records) {
  std::string text;
  for (const auto& r : records) {
    text += r.dump();
    text += '\n';
  }
  write_text(path, text);
}

Record evidence_to_json(const std::vector<corpus::EvidenceRef>& evidence) {
  Record arr = Record::array();
  for (const auto& e : evidence) arr.push_back(Record::array({e.page, e.line}));
  return arr;
}

std::vector<corpus::EvidenceRef> evidence_from_json(const Record& value) {
  std::vector<corpus::EvidenceRef> out;
  if (!value.is_array()) throw FormatError("predicted_evidence must be an array");
  for (const auto& pair : value) {
    if (!pair.is_array() || pair.size() != 2 || !pair[0].is_string() || !pair[1].is_number_integer()) {
      throw FormatError("predicted_evidence entries must be [page, line], got " + pair.dump());
    }
    out.push_back(corpus::EvidenceRef{pair[0].get<std::string>(), pair[1].get<int>()});
  }
  return out;
}

eval::PredictionRecord to_prediction(const Record& record) {
  eval::PredictionRecord p;
  if (!record.contains("id") || !record["id"].is_number_integer()) throw FormatError("record without integer id");
  p.claim_id = record["id"].get<std::int64_t>();
  if (record.contains("predicted_pages")) {
    for (const auto& page : record["predicted_pages"]) p.predicted_pages.push_back(page.get<std::string>());
  }
  if (record.contains("predicted_evidence")) p.predicted_evidence = evidence_from_json(record["predicted_evidence"]);
  if (record.contains("predicted_label") && record["predicted_label"].is_string()) {
    const auto label = corpus::label_from_string(record["predicted_label"].get<std::string>());
    if (!label) throw FormatError("unknown predicted_label " + record["predicted_label"].dump());
    p.predicted_label = label;
  }
  return p;
}

rte::SelectedEvidence selected_from_records(const std::vector<Record>& records) {
  rte::SelectedEvidence out;
  for (const auto& r : records) {
    if (!r.contains("predicted_evidence")) continue;
    auto p = to_prediction(r);
    out[p.claim_id] = std::move(p.predicted_evidence);
  }
  return out;
}

}  // namespace factpipe::cli
