// Copyright 2026 The ensemblefuse Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ENSEMBLEFUSE_MATRIX_HPP_
#define ENSEMBLEFUSE_MATRIX_HPP_

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ensemblefuse/errors.hpp"

namespace ensemblefuse {

// Dense row-major matrix. Rows are samples, columns are classes (or
// features), matching the on-disk CSV layout.
template <typename T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, T fill = T{})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<T> data);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return data_.empty(); }

  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  std::span<T> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const T> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }
  std::vector<T> column(std::size_t c) const;

  std::span<T> data() { return data_; }
  std::span<const T> data() const { return data_; }

  Matrix select_rows(std::span<const std::size_t> indices) const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

// Ordered, unique, nonempty class names. Order is authoritative everywhere.
class ClassList {
 public:
  ClassList() = default;
  explicit ClassList(std::vector<std::string> names);

  std::size_t size() const { return names_.size(); }
  const std::string& operator[](std::size_t i) const { return names_[i]; }
  const std::vector<std::string>& names() const { return names_; }
  std::optional<std::size_t> index_of(const std::string& name) const;

  friend bool operator==(const ClassList&, const ClassList&) = default;

 private:
  std::vector<std::string> names_;
};

// N x C probabilities, every entry finite and in [0, 1], N >= 1.
class PredictionMatrix {
 public:
  PredictionMatrix() = default;
  PredictionMatrix(ClassList classes, Matrix<double> values);

  const ClassList& classes() const { return classes_; }
  const Matrix<double>& values() const { return values_; }
  std::size_t n_samples() const { return values_.rows(); }
  std::size_t n_classes() const { return values_.cols(); }
  double operator()(std::size_t r, std::size_t c) const { return values_(r, c); }

  PredictionMatrix select_rows(std::span<const std::size_t> indices) const;

  friend bool operator==(const PredictionMatrix&, const PredictionMatrix&) = default;

 private:
  ClassList classes_;
  Matrix<double> values_;
};

// N x C binary ground truth.
class LabelMatrix {
 public:
  LabelMatrix() = default;
  LabelMatrix(ClassList classes, Matrix<std::uint8_t> values);

  const ClassList& classes() const { return classes_; }
  const Matrix<std::uint8_t>& values() const { return values_; }
  std::size_t n_samples() const { return values_.rows(); }
  std::size_t n_classes() const { return values_.cols(); }
  std::uint8_t operator()(std::size_t r, std::size_t c) const { return values_(r, c); }

  LabelMatrix select_rows(std::span<const std::size_t> indices) const;

  friend bool operator==(const LabelMatrix&, const LabelMatrix&) = default;

 private:
  ClassList classes_;
  Matrix<std::uint8_t> values_;
};

// ---------------------------------------------------------------------------

template <typename T>
Matrix<T>::Matrix(std::size_t rows, std::size_t cols, std::vector<T> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) {
    throw ValidationError("matrix data size " + std::to_string(data_.size()) +
                          " does not match shape " + std::to_string(rows_) +
                          "x" + std::to_string(cols_));
  }
}

template <typename T>
std::vector<T> Matrix<T>::column(std::size_t c) const {
  std::vector<T> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

template <typename T>
Matrix<T> Matrix<T>::select_rows(std::span<const std::size_t> indices) const {
  Matrix out(indices.size(), cols_);
  for (std::size_t i = 0; i < indices.size(); ++i) {
    auto src = row(indices[i]);
    std::copy(src.begin(), src.end(), out.row(i).begin());
  }
  return out;
}

}  // namespace ensemblefuse

#endif  // ENSEMBLEFUSE_MATRIX_HPP_
