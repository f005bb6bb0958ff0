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

#include "factpipe/numerics/params.h"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "factpipe/common/error.h"
#include "factpipe/common/hash.h"

namespace factpipe::numerics {

Tensor& ParamSet::create(const std::string& name, Shape shape) {
  return adopt(name, Tensor(std::move(shape)));
}

Tensor& ParamSet::create_uniform(const std::string& name, Shape shape, double bound) {
  Tensor t(std::move(shape));
  for (double& v : t.values()) v = rng_.uniform(-bound, bound);
  return adopt(name, std::move(t));
}

Tensor& ParamSet::create_constant(const std::string& name, Shape shape, double value) {
  Tensor t(std::move(shape));
  t.fill(value);
  return adopt(name, std::move(t));
}

Tensor& ParamSet::adopt(const std::string& name, Tensor value) {
  if (name.empty()) throw Error("parameter name must be non-empty");
  if (params_.count(name)) throw Error("duplicate parameter name '" + name + "'");
  Tensor grad(value.shape());
  auto [it, _] = params_.emplace(name, Param{std::move(value), std::move(grad)});
  return it->second.value;
}

const Param& ParamSet::param(const std::string& name) const {
  auto it = params_.find(name);
  if (it == params_.end()) throw NotFoundError("no parameter named '" + name + "'");
  return it->second;
}

Param& ParamSet::param(const std::string& name) {
  auto it = params_.find(name);
  if (it == params_.end()) throw NotFoundError("no parameter named '" + name + "'");
  return it->second;
}

const Tensor& ParamSet::value(const std::string& name) const { return param(name).value; }
Tensor& ParamSet::mutable_value(const std::string& name) { return param(name).value; }

std::vector<std::string> ParamSet::names() const {
  std::vector<std::string> out;
  out.reserve(params_.size());
  for (const auto& [name, _] : params_) out.push_back(name);
  return out;
}

std::size_t ParamSet::scalar_count() const {
  std::size_t n = 0;
  for (const auto& [_, p] : params_) n += p.value.size();
  return n;
}

void ParamSet::zero_grad() {
  for (auto& [_, p] : params_) p.grad.fill(0.0);
}

std::uint64_t ParamSet::checksum() const {
  Fnv1a h;
  for (const auto& [name, p] : params_) {
    h.update(name);
    for (std::size_t d : p.value.shape()) h.update(static_cast<std::uint64_t>(d));
    for (double v : p.value.values()) h.update(v);
  }
  return h.digest();
}

void ParamSet::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write checkpoint " + path.string());
  out << kCheckpointMagic << "\n";
  out << "seed " << seed_ << "\n";
  out << "params " << params_.size() << "\n";
  char buf[32];
  for (const auto& [name, p] : params_) {
    out << name << " " << p.value.rank();
    for (std::size_t d : p.value.shape()) out << " " << d;
    out << "\n";
    bool first = true;
    for (double v : p.value.values()) {
      std::snprintf(buf, sizeof(buf), "%.17g", v);
      if (!first) out << " ";
      out << buf;
      first = false;
    }
    out << "\n";
  }
  if (!out) throw IoError("failed writing checkpoint " + path.string());
}

ParamSet ParamSet::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read checkpoint " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != kCheckpointMagic) {
    throw FormatError(path.string() + ": missing " + std::string(kCheckpointMagic) + " header");
  }
  std::string key;
  std::uint64_t seed = 0;
  std::size_t count = 0;
  if (!(in >> key >> seed) || key != "seed") throw FormatError(path.string() + ": bad seed line");
  if (!(in >> key >> count) || key != "params") throw FormatError(path.string() + ": bad params line");
  ParamSet set(seed);
  for (std::size_t i = 0; i < count; ++i) {
    std::string name;
    std::size_t rank = 0;
    if (!(in >> name >> rank) || rank == 0) {
      throw FormatError(path.string() + ": bad header for parameter " + std::to_string(i));
    }
    Shape shape(rank);
    std::size_t n = 1;
    for (auto& d : shape) {
      if (!(in >> d)) throw FormatError(path.string() + ": bad shape for '" + name + "'");
      n *= d;
    }
    std::vector<double> values(n);
    for (auto& v : values) {
      if (!(in >> v)) throw FormatError(path.string() + ": truncated values for '" + name + "'");
    }
    set.adopt(name, Tensor(std::move(shape), std::move(values)));
  }
  return set;
}

}  // namespace factpipe::numerics
