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

#ifndef FACTPIPE_NUMERICS_TENSOR_H_
#define FACTPIPE_NUMERICS_TENSOR_H_

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace factpipe::numerics {

using Shape = std::vector<std::size_t>;

std::string shape_string(const Shape& shape);

// Dense row-major array of doubles.
//
// Every operation in the library works on rank-1 and rank-2 tensors. A rank-1
// tensor of length n behaves as a 1 x n row vector, so rows() is 1 and cols()
// is n. Higher ranks can be stored and checkpointed but not computed with.
class Tensor {
 public:
  Tensor() = default;

  // Zero-filled tensor.
  explicit Tensor(Shape shape);

  // Takes ownership of `values`. Throws ShapeError when the element count does
  // not match, and FormatError on NaN/Inf while checked mode is on.
  Tensor(Shape shape, std::vector<double> values);

  static Tensor matrix(std::size_t rows, std::size_t cols) { return Tensor(Shape{rows, cols}); }
  static Tensor matrix(std::size_t rows, std::size_t cols, std::vector<double> values) {
    return Tensor(Shape{rows, cols}, std::move(values));
  }
  static Tensor vector(std::vector<double> values) {
    const std::size_t n = values.size();
    return Tensor(Shape{n}, std::move(values));
  }
  static Tensor scalar(double v) { return Tensor(Shape{1}, {v}); }
  static Tensor identity(std::size_t n);
  // `rows` given as nested lists; all rows must have the same length.
  static Tensor from_rows(std::initializer_list<std::initializer_list<double>> rows);

  const Shape& shape() const { return shape_; }
  std::size_t rank() const { return shape_.size(); }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }

  std::size_t rows() const;
  std::size_t cols() const;

  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator()(std::size_t r, std::size_t c) { return values_[r * cols() + c]; }
  double operator()(std::size_t r, std::size_t c) const { return values_[r * cols() + c]; }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }
  std::span<double> row(std::size_t r) { return std::span<double>(values_).subspan(r * cols(), cols()); }
  std::span<const double> row(std::size_t r) const {
    return std::span<const double>(values_).subspan(r * cols(), cols());
  }

  // Scalar value of a single-element tensor.
  double item() const;

  void fill(double v);

  bool same_shape(const Tensor& other) const { return rows() == other.rows() && cols() == other.cols(); }

  friend bool operator==(const Tensor& a, const Tensor& b) = default;

 private:
  Shape shape_;
  std::vector<double> values_;
};

// Checked mode rejects non-finite values in Tensor(Shape, values). On by
// default; the setting is process-wide.
void set_checked_mode(bool on);
bool checked_mode();

}  // namespace factpipe::numerics

#endif  // FACTPIPE_NUMERICS_TENSOR_H_
