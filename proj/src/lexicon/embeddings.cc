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

#include "factpipe/lexicon/embeddings.h"

#include <charconv>
#include <fstream>
#include <sstream>

#include "factpipe/common/error.h"
#include "factpipe/common/hash.h"
#include "factpipe/common/rng.h"

namespace factpipe::lexicon {
namespace {

std::string to_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

std::vector<std::string_view> split_spaces(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) fields.push_back(line.substr(i, j - i));
    i = j;
  }
  return fields;
}

bool parse_double(std::string_view s, double& out) {
  // strtod handles every spelling the vector files use (1e-05, -.5, ...).
  std::string tmp(s);
  char* end = nullptr;
  out = std::strtod(tmp.c_str(), &end);
  return end == tmp.c_str() + tmp.size() && !tmp.empty();
}

bool parse_size(std::string_view s, std::size_t& out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace

EmbeddingTable::EmbeddingTable(std::size_t dim, std::string name) : dim_(dim), name_(std::move(name)) {
  if (dim_ == 0) throw FormatError("embedding dimension must be positive");
}

EmbeddingTable EmbeddingTable::synthetic(std::size_t dim, std::string name) {
  EmbeddingTable t(dim, std::move(name));
  t.synthetic_ = true;
  return t;
}

bool EmbeddingTable::add(std::string token, std::span<const double> vector) {
  if (vector.size() != dim_) {
    throw FormatError("embedding for '" + token + "' has " + std::to_string(vector.size()) +
                      " values, expected " + std::to_string(dim_));
  }
  if (index_.count(token)) return false;
  index_.emplace(std::move(token), rows_.size() / dim_);
  rows_.insert(rows_.end(), vector.begin(), vector.end());
  return true;
}

std::optional<std::span<const double>> EmbeddingTable::find(std::string_view token) const {
  auto it = index_.find(std::string(token));
  if (it == index_.end()) it = index_.find(to_lower(token));
  if (it == index_.end()) return std::nullopt;
  return std::span<const double>(rows_).subspan(it->second * dim_, dim_);
}

std::vector<double> EmbeddingTable::hashed(std::string_view key, double scale) const {
  Rng rng(Fnv1a().update(name_).update(std::string_view("\x1f", 1)).update(key).digest());
  std::vector<double> v(dim_);
  for (double& x : v) x = rng.uniform(-scale, scale);
  return v;
}

std::vector<double> EmbeddingTable::lookup(std::string_view token) const {
  if (synthetic_) return hashed(to_lower(token), 1.0);
  if (auto row = find(token)) return std::vector<double>(row->begin(), row->end());
  return hashed(token, kOovScale);
}

EmbeddingTable load_embedding_table(const std::filesystem::path& path, std::size_t expected_dim) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read embedding file " + path.string());
  EmbeddingTable table(expected_dim, path.filename().string());
  std::string line;
  std::size_t line_no = 0;
  std::vector<double> values;
  while (std::getline(in, line)) {
    ++line_no;
    auto fields = split_spaces(line);
    if (fields.empty()) continue;
    if (line_no == 1 && fields.size() == 2) {
      std::size_t count = 0, dim = 0;
      if (parse_size(fields[0], count) && parse_size(fields[1], dim) && dim == expected_dim) continue;
    }
    if (fields.size() - 1 != expected_dim) {
      throw FormatError(path.string() + ":" + std::to_string(line_no) + ": " + std::to_string(fields.size() - 1) +
                        " values, expected " + std::to_string(expected_dim));
    }
    values.resize(expected_dim);
    for (std::size_t i = 0; i < expected_dim; ++i) {
      if (!parse_double(fields[i + 1], values[i])) {
        throw FormatError(path.string() + ":" + std::to_string(line_no) + ": bad number '" +
                          std::string(fields[i + 1]) + "'");
      }
    }
    table.add(std::string(fields[0]), values);
  }
  return table;
}

std::vector<double> Lexicon::embed(std::string_view token) const {
  std::vector<double> out = first.lookup(token);
  std::vector<double> tail = second.lookup(token);
  out.insert(out.end(), tail.begin(), tail.end());
  return out;
}

numerics::Tensor Lexicon::embed(const std::vector<std::string>& tokens) const {
  if (tokens.empty()) throw ShapeError("cannot embed an empty token sequence");
  const std::size_t d = dim();
  std::vector<double> values;
  values.reserve(tokens.size() * d);
  for (const std::string& t : tokens) {
    std::vector<double> v = embed(t);
    values.insert(values.end(), v.begin(), v.end());
  }
  return numerics::Tensor::matrix(tokens.size(), d, std::move(values));
}

numerics::Tensor Lexicon::embed(const TokenSeq& tokens) const { return embed(tokens.texts()); }

}  // namespace factpipe::lexicon
