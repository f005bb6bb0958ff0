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

#ifndef FACTPIPE_LEXICON_STEMMER_H_
#define FACTPIPE_LEXICON_STEMMER_H_

#include <string>
#include <string_view>

namespace factpipe::lexicon {

// Porter stem of `word` after ASCII lowercasing. Matches Martin Porter's
// reference implementation, which leaves words of one or two letters alone and
// uses the "bli" -> "ble" and "logi" -> "log" step-2 rules.
std::string stem(std::string_view word);

}  // namespace factpipe::lexicon

#endif  // FACTPIPE_LEXICON_STEMMER_H_
