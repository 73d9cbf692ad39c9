/*
 * Copyright 2026 The MannLab Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *    http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace mann {

// Raised when a forward evaluation produces NaN/Inf. Training treats it as
// divergence, everything else as a bug.
struct NonFiniteError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Dense row-major matrix of 64-bit reals. Column vectors are n x 1.
// A tensor returned by a Tape op remembers its node id; plain constants
// keep node = -1 and can be fed into ops freely (no gradient flows back).
class Tensor {
 public:
  Tensor() = default;
  Tensor(int rows, int cols) : rows_(rows), cols_(cols), data_(check_dims(rows, cols)) {}

  static Tensor zeros(int rows, int cols) { return Tensor(rows, cols); }
  static Tensor full(int rows, int cols, double v) {
    Tensor t(rows, cols);
    for (auto& x : t.data_) x = v;
    return t;
  }
  static Tensor ones(int rows, int cols) { return full(rows, cols, 1.0); }
  static Tensor from(std::vector<double> values, int rows, int cols) {
    Tensor t;
    t.rows_ = rows;
    t.cols_ = cols;
    if (static_cast<size_t>(check_dims(rows, cols)) != values.size())
      throw std::invalid_argument("Tensor::from: " + std::to_string(values.size()) +
                                  " values for shape " + std::to_string(rows) + "x" +
                                  std::to_string(cols));
    t.data_ = std::move(values);
    return t;
  }
  static Tensor column(std::vector<double> values) {
    int n = static_cast<int>(values.size());
    return from(std::move(values), n, 1);
  }
  // One-hot column vector.
  static Tensor onehot(int n, int hot) {
    Tensor t(n, 1);
    t.data_[hot] = 1.0;
    return t;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int size() const { return rows_ * cols_; }
  bool same_shape(const Tensor& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

  double& at(int r, int c) { return data_[static_cast<size_t>(r) * cols_ + c]; }
  double at(int r, int c) const { return data_[static_cast<size_t>(r) * cols_ + c]; }
  double& operator[](int i) { return data_[i]; }
  double operator[](int i) const { return data_[i]; }

  void fill(double v) {
    for (auto& x : data_) x = v;
  }
  bool all_finite() const {
    for (double x : data_)
      if (!std::isfinite(x)) return false;
    return true;
  }
  std::string shape_str() const {
    return std::to_string(rows_) + "x" + std::to_string(cols_);
  }

  bool operator==(const Tensor& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
  }

  // Tape linkage (set by Tape::apply / Tape::leaf).
  int node = -1;
  std::uint64_t tape_id = 0;

 private:
  static int check_dims(int rows, int cols) {
    if (rows <= 0 || cols <= 0)
      throw std::invalid_argument("Tensor: non-positive shape " + std::to_string(rows) + "x" +
                                  std::to_string(cols));
    return rows * cols;
  }

  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

}  // namespace mann
