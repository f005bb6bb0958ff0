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

#ifndef FACTPIPE_NUMERICS_PARAMS_H_
#define FACTPIPE_NUMERICS_PARAMS_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "factpipe/common/rng.h"
#include "factpipe/numerics/tensor.h"

namespace factpipe::numerics {

// Magic first line of a checkpoint file.
inline constexpr const char kCheckpointMagic[] = "FACTPIPE-PARAMS-1";

struct Param {
  Tensor value;
  Tensor grad;
};

// Named trainable tensors plus the seed that initialized them.
//
// Names are unique and shapes never change after create(). Iteration order is
// lexicographic by name, so checkpoints and checksums are reproducible.
class ParamSet {
 public:
  explicit ParamSet(std::uint64_t seed = 0) : seed_(seed), rng_(seed) {}

  ParamSet(const ParamSet&) = delete;
  ParamSet& operator=(const ParamSet&) = delete;
  ParamSet(ParamSet&&) = default;
  ParamSet& operator=(ParamSet&&) = default;

  // Creates a zero tensor. Throws Error if the name is taken.
  Tensor& create(const std::string& name, Shape shape);
  // Creates a tensor with entries uniform in [-bound, bound] from the set's rng.
  Tensor& create_uniform(const std::string& name, Shape shape, double bound);
  Tensor& create_constant(const std::string& name, Shape shape, double value);
  // Adopts an existing value, e.g. when loading a checkpoint.
  Tensor& adopt(const std::string& name, Tensor value);

  bool contains(const std::string& name) const { return params_.count(name) != 0; }
  const Tensor& value(const std::string& name) const;
  Tensor& mutable_value(const std::string& name);
  Param& param(const std::string& name);
  const Param& param(const std::string& name) const;

  std::vector<std::string> names() const;
  std::size_t size() const { return params_.size(); }
  std::size_t scalar_count() const;

  void zero_grad();

  std::uint64_t seed() const { return seed_; }
  Rng& rng() { return rng_; }

  // FNV-1a over names, shapes and value bits.
  std::uint64_t checksum() const;

  // Text checkpoint: magic line, "seed N", "params N", then per parameter a
  // "name rank d0 d1 ..." line followed by one line of %.17g values.
  void save(const std::filesystem::path& path) const;
  static ParamSet load(const std::filesystem::path& path);

  auto begin() { return params_.begin(); }
  auto end() { return params_.end(); }
  auto begin() const { return params_.begin(); }
  auto end() const { return params_.end(); }

 private:
  std::uint64_t seed_;
  Rng rng_;
  std::map<std::string, Param> params_;
};

}  // namespace factpipe::numerics

#endif  // FACTPIPE_NUMERICS_PARAMS_H_
