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

#include "fixtures.h"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <sys/wait.h>
#include <unistd.h>

#include "factpipe/corpus/claims.h"

namespace factpipe::testing {

std::filesystem::path fixture_dir() { return FACTPIPE_FIXTURE_DIR; }
std::filesystem::path cli_path() { return FACTPIPE_CLI_PATH; }

TempDir::TempDir(const std::string& tag) {
  static std::atomic<int> counter{0};
  path_ = std::filesystem::temp_directory_path() /
          (tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
  std::filesystem::remove_all(path_);
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  if (path_.empty()) return;
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

ToyWorld build_toy_world(const ToyOptions& options) {
  TempDir dir("factpipe-toy");
  write_toy_corpus(make_toy_corpus(options), dir.path());
  auto store = corpus::ArticleStore::ingest(dir / "wiki");
  auto claims = corpus::load_claims(dir / "claims.jsonl").claims;
  return ToyWorld{std::move(dir), std::move(store), std::move(claims)};
}

lexicon::Lexicon synthetic_lexicon(std::size_t half) {
  return lexicon::Lexicon{lexicon::EmbeddingTable::synthetic(half, "first"),
                          lexicon::EmbeddingTable::synthetic(half, "second")};
}

void fill_sine(numerics::ParamSet& params) {
  std::size_t k = 0;
  for (auto& [name, param] : params) {
    for (double& v : param.value.values()) v = 0.6 * std::sin(0.7 * static_cast<double>(k++) + 0.3);
  }
}

numerics::Tensor claim_input(std::size_t t, std::size_t d) {
  numerics::Tensor x = numerics::Tensor::matrix(t, d);
  for (std::size_t r = 0; r < t; ++r) {
    for (std::size_t c = 0; c < d; ++c) x(r, c) = 0.8 * std::cos(0.5 * static_cast<double>(r * d + c) + 0.2);
  }
  return x;
}

numerics::Tensor sentence_input(std::size_t t, std::size_t d, double phase) {
  numerics::Tensor x = numerics::Tensor::matrix(t, d);
  for (std::size_t r = 0; r < t; ++r) {
    for (std::size_t c = 0; c < d; ++c) {
      x(r, c) = 0.8 * std::cos(0.9 * static_cast<double>(r * d + c) - 0.4 + phase);
    }
  }
  return x;
}

numerics::Tensor random_tensor(Rng& rng, numerics::Shape shape) {
  numerics::Tensor t(std::move(shape));
  for (double& v : t.values()) v = rng.uniform(-1.0, 1.0);
  return t;
}

int run_command(const std::string& command) {
  const int status = std::system(command.c_str());
  if (status == -1) return -1;
  return WIFEXITED(status) ? WEXITSTATUS(status) : 128;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace factpipe::testing
