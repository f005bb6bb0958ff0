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

#ifndef FACTPIPE_CLI_RECORDS_H_
#define FACTPIPE_CLI_RECORDS_H_

#include <filesystem>
#include <string>
#include <vector>

#include "factpipe/corpus/types.h"
#include "factpipe/eval/metrics.h"
#include "factpipe/rte/rte.h"
#include "json.hpp"

namespace factpipe::cli {

using Record = nlohmann::ordered_json;

// One JSON object per non-empty line. Throws FormatError naming path:line.
std::vector<Record> read_jsonl(const std::filesystem::path& path);
// Writes to a temporary sibling and renames, so readers never see a partial file.
void write_jsonl(const std::filesystem::path& path, const std::vector<Record>& records);
void write_text(const std::filesystem::path& path, const std::string& text);

Record evidence_to_json(const std::vector<corpus::EvidenceRef>& evidence);
std::vector<corpus::EvidenceRef> evidence_from_json(const Record& value);

// id, predicted_pages, predicted_evidence, predicted_label when present.
eval::PredictionRecord to_prediction(const Record& record);

// Claim id to predicted_evidence for every record carrying it.
rte::SelectedEvidence selected_from_records(const std::vector<Record>& records);

}  // namespace factpipe::cli

#endif  // FACTPIPE_CLI_RECORDS_H_
