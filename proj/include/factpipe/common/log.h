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

#ifndef FACTPIPE_COMMON_LOG_H_
#define FACTPIPE_COMMON_LOG_H_

#include <sstream>
#include <string>
#include <string_view>

namespace factpipe::log {

enum class Level { kDebug = 0, kInfo = 1, kWarning = 2, kError = 3, kSilent = 4 };

// Messages below this level are dropped. Default: kInfo.
void set_level(Level level);
Level level();

void write(Level level, std::string_view message);

// Also appends every written message, prefixed with a UTC timestamp, to
// `path`. An empty path closes the file. Returns false if it cannot be opened.
bool set_file(const std::string& path);

template <typename... Args>
void info(const Args&... args) {
  if (level() > Level::kInfo) return;
  std::ostringstream out;
  (out << ... << args);
  write(Level::kInfo, out.str());
}

template <typename... Args>
void warn(const Args&... args) {
  if (level() > Level::kWarning) return;
  std::ostringstream out;
  (out << ... << args);
  write(Level::kWarning, out.str());
}

template <typename... Args>
void error(const Args&... args) {
  std::ostringstream out;
  (out << ... << args);
  write(Level::kError, out.str());
}

template <typename... Args>
void debug(const Args&... args) {
  if (level() > Level::kDebug) return;
  std::ostringstream out;
  (out << ... << args);
  write(Level::kDebug, out.str());
}

}  // namespace factpipe::log

#endif  // FACTPIPE_COMMON_LOG_H_
