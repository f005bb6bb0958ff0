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

#include "factpipe/corpus/types.h"

namespace factpipe::corpus {
namespace {

void replace_all(std::string& s, std::string_view from, std::string_view to) {
  std::size_t pos = 0;
  while ((pos = s.find(from, pos)) != std::string::npos) {
    s.replace(pos, from.size(), to);
    pos += to.size();
  }
}

}  // namespace

std::string_view label_to_string(Label label) {
  switch (label) {
    case Label::kSupported: return "SUPPORTS";
    case Label::kRefuted: return "REFUTES";
    case Label::kNotEnoughInfo: return "NOT ENOUGH INFO";
  }
  return "";
}

std::optional<Label> label_from_string(std::string_view s) {
  if (s == "SUPPORTS") return Label::kSupported;
  if (s == "REFUTES") return Label::kRefuted;
  if (s == "NOT ENOUGH INFO") return Label::kNotEnoughInfo;
  return std::nullopt;
}

std::string normalize_title(std::string_view title) {
  std::string out(title);
  for (char& c : out) {
    if (c == ' ') c = '_';
  }
  return out;
}

std::string display_title(std::string_view id) {
  std::string out(id);
  replace_all(out, "-LRB-", "(");
  replace_all(out, "-RRB-", ")");
  replace_all(out, "-COLON-", ":");
  for (char& c : out) {
    if (c == '_') c = ' ';
  }
  return out;
}

}  // namespace factpipe::corpus
