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

#ifndef FACTPIPE_COMMON_HASH_H_
#define FACTPIPE_COMMON_HASH_H_

#include <cstdint>
#include <cstring>
#include <string_view>

namespace factpipe {

// 64-bit FNV-1a. Stable across platforms, unlike std::hash.
class Fnv1a {
 public:
  static constexpr std::uint64_t kOffset = 14695981039346656037ULL;
  static constexpr std::uint64_t kPrime = 1099511628211ULL;

  Fnv1a& update(const void* data, std::size_t size) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < size; ++i) {
      state_ ^= bytes[i];
      state_ *= kPrime;
    }
    return *this;
  }
  Fnv1a& update(std::string_view s) { return update(s.data(), s.size()); }
  Fnv1a& update(std::uint64_t v) { return update(&v, sizeof(v)); }
  Fnv1a& update(double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof(bits));
    return update(bits);
  }

  std::uint64_t digest() const { return state_; }

 private:
  std::uint64_t state_ = kOffset;
};

inline std::uint64_t fnv1a(std::string_view s) { return Fnv1a().update(s).digest(); }

}  // namespace factpipe

#endif  // FACTPIPE_COMMON_HASH_H_
