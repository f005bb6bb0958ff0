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

#include "factpipe/lexicon/tokenizer.h"

namespace factpipe::lexicon {
namespace {

bool is_space(unsigned char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

bool is_word_char(unsigned char c) {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c >= 0x80;
}

}  // namespace

std::vector<std::string> TokenSeq::texts() const {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const Token& t : tokens) out.push_back(t.text);
  return out;
}

std::string TokenSeq::join(std::size_t begin, std::size_t end) const {
  std::string out;
  for (std::size_t i = begin; i < end && i < tokens.size(); ++i) {
    if (i > begin) out += ' ';
    out += tokens[i].text;
  }
  return out;
}

TokenSeq tokenize(std::string_view text) {
  TokenSeq seq;
  std::size_t i = 0;
  while (i < text.size()) {
    const auto c = static_cast<unsigned char>(text[i]);
    if (is_space(c)) {
      ++i;
      continue;
    }
    std::size_t j = i + 1;
    if (is_word_char(c)) {
      while (j < text.size() && is_word_char(static_cast<unsigned char>(text[j]))) ++j;
    }
    seq.tokens.push_back(Token{std::string(text.substr(i, j - i)), i, j});
    i = j;
  }
  return seq;
}

bool is_word_token(std::string_view token) {
  for (char c : token) {
    if (is_word_char(static_cast<unsigned char>(c))) return true;
  }
  return false;
}

}  // namespace factpipe::lexicon
