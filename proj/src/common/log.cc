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

#include "factpipe/common/log.h"

#include <atomic>
#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>
#include <mutex>

namespace factpipe::log {
namespace {

std::atomic<Level> g_level{Level::kInfo};
std::mutex g_mu;
std::ofstream g_file;

const char* tag(Level level) {
  switch (level) {
    case Level::kDebug: return "D";
    case Level::kInfo: return "I";
    case Level::kWarning: return "W";
    case Level::kError: return "E";
    default: return "?";
  }
}

}  // namespace

void set_level(Level level) { g_level = level; }
Level level() { return g_level; }

void write(Level lvl, std::string_view message) {
  if (lvl < g_level.load()) return;
  std::lock_guard<std::mutex> lock(g_mu);
  std::cerr << tag(lvl) << " " << message << "\n";
  if (g_file.is_open()) {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &tm);
    g_file << stamp << " " << tag(lvl) << " " << message << "\n";
    g_file.flush();
  }
}

bool set_file(const std::string& path) {
  std::lock_guard<std::mutex> lock(g_mu);
  if (g_file.is_open()) g_file.close();
  if (path.empty()) return true;
  g_file.open(path, std::ios::app);
  return g_file.is_open();
}

}  // namespace factpipe::log
