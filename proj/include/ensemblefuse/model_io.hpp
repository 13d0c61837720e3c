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

#ifndef ENSEMBLEFUSE_MODEL_IO_HPP_
#define ENSEMBLEFUSE_MODEL_IO_HPP_

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "ensemblefuse/matrix.hpp"

// CSV interchange for prediction and label matrices.
//
// Layout: a mandatory header row of class names followed by one row per
// sample, comma separated, no quoting. LF or CRLF line endings are accepted
// on read; LF is always written. Doubles are written with 17 significant
// digits so that read(write(m)) == m bit-for-bit.
//
// Every malformed input raises ValidationError naming the offending row
// (1-based, counting data rows only) and class. No partial matrix is ever
// returned.
namespace ensemblefuse::io {

// Header + numeric body with no range constraint (used for feature files).
struct NumericTable {
  std::vector<std::string> columns;
  Matrix<double> values;
};

NumericTable parse_numeric_csv(std::istream& in, const std::string& source);
NumericTable read_numeric_csv(const std::filesystem::path& path);
void write_numeric_csv(const NumericTable& table, const std::filesystem::path& path);

PredictionMatrix parse_predictions(std::istream& in, const std::string& source);
PredictionMatrix read_predictions(const std::filesystem::path& path);

LabelMatrix parse_labels(std::istream& in, const std::string& source);
LabelMatrix read_labels(const std::filesystem::path& path);

void write_predictions(const PredictionMatrix& m, std::ostream& out);
void write_predictions(const PredictionMatrix& m, const std::filesystem::path& path);
void write_labels(const LabelMatrix& m, const std::filesystem::path& path);

// 17 significant digits; always parses back to exactly `value`.
std::string format_double(double value);

// Predictions and labels that agree on sample count and class order.
struct AlignedSet {
  std::vector<PredictionMatrix> predictions;
  LabelMatrix labels;
};

// Throws ValidationError on a sample-count mismatch or when class lists
// differ; a pure reordering is reported together with the permutation that
// would fix it.
void check_aligned(std::span<const PredictionMatrix> preds, const LabelMatrix& labels);
void check_aligned(std::span<const PredictionMatrix> preds);
AlignedSet align(std::vector<PredictionMatrix> preds, LabelMatrix labels);

}  // namespace ensemblefuse::io

#endif  // ENSEMBLEFUSE_MODEL_IO_HPP_
