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

#ifndef FACTPIPE_CLI_COMMANDS_H_
#define FACTPIPE_CLI_COMMANDS_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "factpipe/cli/config.h"
#include "factpipe/cli/records.h"
#include "factpipe/corpus/article_store.h"
#include "factpipe/corpus/types.h"
#include "factpipe/eval/metrics.h"

namespace factpipe::cli {

namespace fs = std::filesystem;

// A pipeline stage failed; what() names the stage.
class StageError : public Error {
 public:
  StageError(std::string stage, const std::string& cause)
      : Error("stage " + stage + " failed: " + cause), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

// Builds the store if needed and opens it. Throws MissingInputError when the
// dump is absent.
corpus::ArticleStore open_store(const PipelineConfig& config);

// Claims with rejected records logged as warnings.
std::vector<corpus::Claim> read_claims(const fs::path& path);

// {id, claim, predicted_pages} per claim, in input order.
std::vector<Record> retrieve_records(const PipelineConfig& config, const corpus::ArticleStore& store,
                                     const std::vector<corpus::Claim>& claims);

void run_ingest(const PipelineConfig& config);
void run_retrieve(const PipelineConfig& config, const fs::path& claims, const fs::path& out);
void run_train_ranker(const PipelineConfig& config, const fs::path& claims, const std::vector<std::uint64_t>& seeds,
                      const fs::path& out_dir);
// Adds predicted_evidence and scores to each retrieved record.
void run_select(const PipelineConfig& config, const fs::path& models_dir, const fs::path& retrieved,
                const fs::path& out);
void run_train_rte(const PipelineConfig& config, const fs::path& claims, const fs::path& selected,
                   const fs::path& out);
// Adds predicted_label, logits and attention_weights to each selected record.
void run_classify(const PipelineConfig& config, const fs::path& model, const fs::path& selected,
                  const fs::path& out);
eval::MetricsReport run_evaluate(const fs::path& gold, const fs::path& pred, std::size_t sentences_used = 5);

std::string ranker_file_name(std::uint64_t seed);

struct PipelineOptions {
  bool force = false;
  // Written next to the artifacts; stages rerun when it is newer than their
  // outputs.
  std::string config_text;
};

// ingest, retrieve, train-ranker, select, train-rte, classify, evaluate.
// A stage whose outputs exist and are newer than its inputs is skipped unless
// force is set.
eval::MetricsReport run_pipeline(const PipelineConfig& config, const PipelineOptions& options = {});

// Command-line entry point. Returns the process exit code.
int run_cli(int argc, char** argv);

}  // namespace factpipe::cli

#endif  // FACTPIPE_CLI_COMMANDS_H_
