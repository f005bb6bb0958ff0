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

#ifndef FACTPIPE_LEXICON_EMBEDDINGS_H_
#define FACTPIPE_LEXICON_EMBEDDINGS_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "factpipe/lexicon/tokenizer.h"
#include "factpipe/numerics/tensor.h"

namespace factpipe::lexicon {

// Entries of out-of-vocabulary vectors are uniform in [-kOovScale, kOovScale].
inline constexpr double kOovScale = 0.05;

// Frozen token -> vector table.
//
// A synthetic table has no stored rows: every token maps to a vector hashed
// from its lowercased form with entries in [-1, 1]. It stands in for a
// pretrained file in tests and offline runs.
class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  EmbeddingTable(std::size_t dim, std::string name);

  static EmbeddingTable synthetic(std::size_t dim, std::string name);

  std::size_t dim() const { return dim_; }
  const std::string& name() const { return name_; }
  std::size_t size() const { return index_.size(); }
  bool is_synthetic() const { return synthetic_; }

  // Adds a row unless the token is already present (first occurrence wins).
  // Returns false for duplicates. Throws FormatError on a dimension mismatch.
  bool add(std::string token, std::span<const double> vector);

  // Exact token, then its lowercased form.
  std::optional<std::span<const double>> find(std::string_view token) const;

  // find() or, failing that, the deterministic OOV vector for this table.
  std::vector<double> lookup(std::string_view token) const;

 private:
  std::vector<double> hashed(std::string_view key, double scale) const;

  std::size_t dim_ = 0;
  std::string name_;
  bool synthetic_ = false;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<double> rows_;
};

// Reads the standard text vector format: "token v1 ... vdim" per line, with an
// optional leading "count dim" header. Throws FormatError naming the line of
// the first row whose length differs from `expected_dim`, IoError if the file
// cannot be read.
EmbeddingTable load_embedding_table(const std::filesystem::path& path, std::size_t expected_dim);

// The two tables whose vectors are concatenated for every token.
struct Lexicon {
  EmbeddingTable first;
  EmbeddingTable second;

  std::size_t dim() const { return first.dim() + second.dim(); }

  // [first.lookup(token) ; second.lookup(token)].
  std::vector<double> embed(std::string_view token) const;

  // One row per token; T x dim. Throws ShapeError for an empty sequence.
  numerics::Tensor embed(const TokenSeq& tokens) const;
  numerics::Tensor embed(const std::vector<std::string>& tokens) const;
};

}  // namespace factpipe::lexicon

#endif  // FACTPIPE_LEXICON_EMBEDDINGS_H_
