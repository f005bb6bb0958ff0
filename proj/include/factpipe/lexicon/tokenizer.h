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

#ifndef FACTPIPE_LEXICON_TOKENIZER_H_
#define FACTPIPE_LEXICON_TOKENIZER_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace factpipe::lexicon {

struct Token {
  std::string text;
  // Byte offsets [begin, end) into the tokenized text.
  std::size_t begin = 0;
  std::size_t end = 0;
};

struct TokenSeq {
  std::vector<Token> tokens;

  std::size_t size() const { return tokens.size(); }
  bool empty() const { return tokens.empty(); }
  const Token& operator[](std::size_t i) const { return tokens[i]; }

  std::vector<std::string> texts() const;
  // Tokens [begin, end) joined with single spaces.
  std::string join(std::size_t begin, std::size_t end) const;
};

// Splits on whitespace; runs of letters and digits (and any non-ASCII bytes)
// form word tokens, every other printable character is a token of its own.
TokenSeq tokenize(std::string_view text);

bool is_word_token(std::string_view token);

}  // namespace factpipe::lexicon

#endif  // FACTPIPE_LEXICON_TOKENIZER_H_
