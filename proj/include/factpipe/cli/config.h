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

#ifndef FACTPIPE_CLI_CONFIG_H_
#define FACTPIPE_CLI_CONFIG_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "factpipe/common/error.h"
#include "factpipe/docretrieval/search.h"
#include "factpipe/lexicon/embeddings.h"
#include "factpipe/rte/rte.h"
#include "factpipe/sentsel/ranker.h"

namespace factpipe::cli {

// A required input file or directory does not exist. Exit code 2.
class MissingInputError : public IoError {
 public:
  explicit MissingInputError(const std::filesystem::path& path)
      : IoError("missing input: " + path.string()), path_(path) {}
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

struct PipelineConfig {
  // Paths.
  std::string wiki_dir;
  std::string store_dir;  // empty: "<wiki_dir>.store"
  std::string claims;
  std::string train_claims;  // empty: same as claims
  std::string parses_file;
  std::string work_dir = "factpipe-work";

  // Embeddings: two tables concatenated per token.
  std::string embeddings_first;
  std::size_t embeddings_first_dim = 300;
  std::string embeddings_second;
  std::size_t embeddings_second_dim = 300;
  // Gives each table without a path a synthetic table of this width; 0 off.
  std::size_t synthetic_embeddings = 0;

  // Document retrieval.
  std::size_t k = docretrieval::kDefaultSearchResults;
  bool remote = false;
  docretrieval::MediaWikiConfig mediawiki;

  // Sentence selection.
  std::size_t ensemble_size = sentsel::kDefaultEnsembleSize;
  std::uint64_t seed = 0;
  sentsel::RankerConfig ranker;

  // Entailment.
  rte::RteConfig rte;
  std::uint64_t rte_seed = 0;

  std::size_t jobs = 1;

  std::string resolved_store_dir() const { return store_dir.empty() ? wiki_dir + ".store" : store_dir; }
  std::string resolved_train_claims() const { return train_claims.empty() ? claims : train_claims; }
  std::vector<std::uint64_t> ranker_seeds() const;

  // Sets one key from its text form. Throws Error on unknown keys or bad values.
  void set(const std::string& key, const std::string& value);
  // Throws Error unless every count is at least 1 and sentences is at most 5.
  void validate() const;
  // key = value lines for every setting, in a fixed order.
  std::string to_text() const;
};

// Reads "key = value" lines; '#' starts a comment. Later keys override.
// Relative paths are taken relative to the config file's directory.
void load_config_file(const std::filesystem::path& path, PipelineConfig& config);

// "0..9" or "0,3,7".
std::vector<std::uint64_t> parse_seed_list(const std::string& text);

// Builds the two-table lexicon; tables without a path become synthetic when
// synthetic_embeddings is positive.
lexicon::Lexicon build_lexicon(const PipelineConfig& config);

}  // namespace factpipe::cli

#endif  // FACTPIPE_CLI_CONFIG_H_
