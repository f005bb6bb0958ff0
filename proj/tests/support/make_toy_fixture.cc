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

// Regenerates the committed toy fixture: make_toy_fixture <dir>.
#include <iostream>

#include "toy_corpus.h"

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: make_toy_fixture <dir>\n";
    return 2;
  }
  factpipe::testing::write_toy_corpus(factpipe::testing::make_toy_corpus(), argv[1]);
  return 0;
}
