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

#ifndef FACTPIPE_TESTS_SUPPORT_FIXTURES_H_
#define FACTPIPE_TESTS_SUPPORT_FIXTURES_H_

#include <filesystem>
#include <string>
#include <vector>

#include "factpipe/common/rng.h"
#include "factpipe/corpus/article_store.h"
#include "factpipe/corpus/types.h"
#include "factpipe/lexicon/embeddings.h"
#include "factpipe/numerics/params.h"
#include "factpipe/numerics/tensor.h"
#include "toy_corpus.h"

namespace factpipe::testing {

std::filesystem::path fixture_dir();
std::filesystem::path cli_path();

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag = "factpipe");
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  TempDir(TempDir&& other) noexcept : path_(std::move(other.path_)) { other.path_.clear(); }

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& child) const { return path_ / child; }

 private:
  std::filesystem::path path_;
};

struct ToyWorld {
  TempDir dir;
  corpus::ArticleStore store;
  std::vector<corpus::Claim> claims;
};

// Writes the generated corpus to a temp dir and ingests it in memory.
ToyWorld build_toy_world(const ToyOptions& options = {});

// Two synthetic tables of `half` dimensions each.
lexicon::Lexicon synthetic_lexicon(std::size_t half = 5);

// Overwrites every parameter, in sorted name order, with
// 0.6 * sin(0.7 * k + 0.3) where k counts scalars across the whole set. The
// torch oracle script uses the same pattern.
void fill_sine(numerics::ParamSet& params);
// Input patterns shared with the oracle script.
numerics::Tensor claim_input(std::size_t t, std::size_t d);
numerics::Tensor sentence_input(std::size_t t, std::size_t d, double phase = 0.0);
// Entries uniform in [-1, 1].
numerics::Tensor random_tensor(Rng& rng, numerics::Shape shape);

// Runs a shell command and returns its exit status.
int run_command(const std::string& command);

std::string read_file(const std::filesystem::path& path);

}  // namespace factpipe::testing

#endif  // FACTPIPE_TESTS_SUPPORT_FIXTURES_H_
