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

#include "factpipe/cli/config.h"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include "factpipe/common/log.h"

namespace factpipe::cli {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) throw Error(key + ": expected a non-negative integer, got '" + v + "'");
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used == v.size()) return d;
  } catch (const std::exception&) {
  }
  throw Error(key + ": expected a number, got '" + v + "'");
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw Error(key + ": expected true or false, got '" + v + "'");
}

std::string fmt_double(double d) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", d);
  return buf;
}

struct Field {
  const char* key;
  std::function<void(PipelineConfig&, const std::string&)> set;
  std::function<std::string(const PipelineConfig&)> get;
};

#define FP_STRING(name, member)                                                       \
  Field {                                                                             \
    name, [](PipelineConfig& c, const std::string& v) { c.member = v; },              \
        [](const PipelineConfig& c) { return c.member; }                              \
  }
#define FP_SIZE(name, member)                                                                       \
  Field {                                                                                           \
    name, [](PipelineConfig& c, const std::string& v) { c.member = to_u64(name, v); },              \
        [](const PipelineConfig& c) { return std::to_string(c.member); }                            \
  }
#define FP_DOUBLE(name, member)                                                                     \
  Field {                                                                                           \
    name, [](PipelineConfig& c, const std::string& v) { c.member = to_double(name, v); },           \
        [](const PipelineConfig& c) { return fmt_double(c.member); }                                \
  }
#define FP_BOOL(name, member)                                                                       \
  Field {                                                                                           \
    name, [](PipelineConfig& c, const std::string& v) { c.member = to_bool(name, v); },             \
        [](const PipelineConfig& c) { return std::string(c.member ? "true" : "false"); }            \
  }

const std::vector<Field>& fields() {
  static const std::vector<Field> kFields = {
      FP_STRING("wiki_dir", wiki_dir),
      FP_STRING("store_dir", store_dir),
      FP_STRING("claims", claims),
      FP_STRING("train_claims", train_claims),
      FP_STRING("parses_file", parses_file),
      FP_STRING("work_dir", work_dir),
      FP_STRING("embeddings_first", embeddings_first),
      FP_SIZE("embeddings_first_dim", embeddings_first_dim),
      FP_STRING("embeddings_second", embeddings_second),
      FP_SIZE("embeddings_second_dim", embeddings_second_dim),
      FP_SIZE("synthetic_embeddings", synthetic_embeddings),
      FP_SIZE("k", k),
      FP_BOOL("remote", remote),
      FP_STRING("endpoint", mediawiki.endpoint),
      FP_SIZE("remote_max_concurrent", mediawiki.max_concurrent),
      FP_DOUBLE("remote_requests_per_second", mediawiki.requests_per_second),
      FP_SIZE("ensemble_size", ensemble_size),
      FP_SIZE("seed", seed),
      FP_SIZE("ranker_hidden", ranker.hidden),
      FP_SIZE("ranker_head_hidden", ranker.head_hidden),
      FP_SIZE("ranker_epochs", ranker.epochs),
      FP_SIZE("ranker_negatives", ranker.negatives),
      FP_SIZE("ranker_negative_sets", ranker.negative_sets),
      FP_DOUBLE("ranker_dropout", ranker.dropout),
      FP_DOUBLE("ranker_lr", ranker.optimizer.lr),
      FP_SIZE("sentences", rte.sentences),
      FP_SIZE("rte_hidden", rte.hidden),
      FP_SIZE("rte_attention_dim", rte.attention_dim),
      FP_SIZE("rte_classifier_hidden1", rte.classifier_hidden1),
      FP_SIZE("rte_classifier_hidden2", rte.classifier_hidden2),
      FP_SIZE("rte_epochs", rte.epochs),
      FP_DOUBLE("rte_dropout", rte.dropout),
      FP_DOUBLE("rte_lr", rte.optimizer.lr),
      FP_SIZE("rte_seed", rte_seed),
      Field{"optimizer",
            [](PipelineConfig& c, const std::string& v) {
              numerics::OptimizerConfig::Kind kind;
              if (v == "adam") {
                kind = numerics::OptimizerConfig::Kind::kAdam;
              } else if (v == "sgd") {
                kind = numerics::OptimizerConfig::Kind::kSgd;
              } else {
                throw Error("optimizer: expected adam or sgd, got '" + v + "'");
              }
              c.ranker.optimizer.kind = kind;
              c.rte.optimizer.kind = kind;
            },
            [](const PipelineConfig& c) {
              return std::string(c.ranker.optimizer.kind == numerics::OptimizerConfig::Kind::kAdam ? "adam" : "sgd");
            }},
      Field{"clip_norm",
            [](PipelineConfig& c, const std::string& v) {
              c.ranker.optimizer.clip_norm = c.rte.optimizer.clip_norm = to_double("clip_norm", v);
            },
            [](const PipelineConfig& c) { return fmt_double(c.ranker.optimizer.clip_norm); }},
      FP_SIZE("jobs", jobs),
  };
  return kFields;
}

#undef FP_STRING
#undef FP_SIZE
#undef FP_DOUBLE
#undef FP_BOOL

bool is_path_key(const std::string& key) {
  static const char* kPathKeys[] = {"wiki_dir",   "store_dir",        "claims",           "train_claims",
                                    "parses_file", "work_dir",        "embeddings_first", "embeddings_second"};
  for (const char* k : kPathKeys) {
    if (key == k) return true;
  }
  return false;
}

}  // namespace

std::vector<std::uint64_t> PipelineConfig::ranker_seeds() const {
  std::vector<std::uint64_t> out;
  for (std::size_t i = 0; i < ensemble_size; ++i) out.push_back(seed + i);
  return out;
}

void PipelineConfig::set(const std::string& key, const std::string& value) {
  for (const auto& f : fields()) {
    if (key == f.key) {
      f.set(*this, value);
      return;
    }
  }
  throw Error("unknown configuration key '" + key + "'");
}

void PipelineConfig::validate() const {
  auto at_least_one = [](const char* name, std::size_t v) {
    if (v < 1) throw Error(std::string(name) + " must be at least 1");
  };
  at_least_one("k", k);
  at_least_one("ensemble_size", ensemble_size);
  at_least_one("sentences", rte.sentences);
  at_least_one("ranker_hidden", ranker.hidden);
  at_least_one("ranker_head_hidden", ranker.head_hidden);
  at_least_one("ranker_negatives", ranker.negatives);
  at_least_one("ranker_negative_sets", ranker.negative_sets);
  at_least_one("rte_hidden", rte.hidden);
  at_least_one("rte_attention_dim", rte.attention_dim);
  at_least_one("rte_classifier_hidden1", rte.classifier_hidden1);
  at_least_one("rte_classifier_hidden2", rte.classifier_hidden2);
  at_least_one("jobs", jobs);
  at_least_one("remote_max_concurrent", mediawiki.max_concurrent);
  if (rte.sentences > rte::kMaxSentences) throw Error("sentences must be at most 5");
  if (ranker.optimizer.lr <= 0.0 || rte.optimizer.lr <= 0.0) throw Error("learning rates must be positive");
  if (ranker.dropout < 0.0 || ranker.dropout >= 1.0 || rte.dropout < 0.0 || rte.dropout >= 1.0) {
    throw Error("dropout rates must be in [0, 1)");
  }
}

std::string PipelineConfig::to_text() const {
  std::string out;
  for (const auto& f : fields()) out += std::string(f.key) + " = " + f.get(*this) + "\n";
  return out;
}

void load_config_file(const std::filesystem::path& path, PipelineConfig& config) {
  std::ifstream in(path);
  if (!in) throw MissingInputError(path);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw FormatError(path.string() + ":" + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(body.substr(0, eq));
    std::string value = trim(body.substr(eq + 1));
    if (is_path_key(key) && !value.empty() && std::filesystem::path(value).is_relative()) {
      value = (path.parent_path() / value).lexically_normal().string();
    }
    try {
      config.set(key, value);
    } catch (const Error& e) {
      throw FormatError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
}

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  std::vector<std::uint64_t> out;
  if (auto dots = text.find(".."); dots != std::string::npos) {
    const auto lo = to_u64("seeds", trim(text.substr(0, dots)));
    const auto hi = to_u64("seeds", trim(text.substr(dots + 2)));
    if (hi < lo) throw Error("seeds: empty range '" + text + "'");
    for (auto s = lo; s <= hi; ++s) out.push_back(s);
    return out;
  }
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_u64("seeds", trim(item)));
  if (out.empty()) throw Error("seeds: no seeds given");
  return out;
}

lexicon::Lexicon build_lexicon(const PipelineConfig& config) {
  auto table = [&](const std::string& path, std::size_t dim, const char* name) {
    if (!path.empty()) {
      if (!std::filesystem::exists(path)) throw MissingInputError(path);
      return lexicon::load_embedding_table(path, dim);
    }
    if (config.synthetic_embeddings == 0) {
      throw Error(std::string("no path for the ") + name +
                  " embedding table; set a path or synthetic_embeddings");
    }
    log::info("using a synthetic ", config.synthetic_embeddings, "-dimensional ", name, " embedding table");
    return lexicon::EmbeddingTable::synthetic(config.synthetic_embeddings, name);
  };
  return lexicon::Lexicon{table(config.embeddings_first, config.embeddings_first_dim, "first"),
                          table(config.embeddings_second, config.embeddings_second_dim, "second")};
}

}  // namespace factpipe::cli
