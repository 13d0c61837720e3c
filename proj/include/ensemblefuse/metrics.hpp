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

#ifndef ENSEMBLEFUSE_METRICS_HPP_
#define ENSEMBLEFUSE_METRICS_HPP_

#include <cstdint>
#include <filesystem>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ensemblefuse/matrix.hpp"

namespace ensemblefuse {

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
  double threshold = std::numeric_limits<double>::infinity();
};

// Starts at (0,0) with threshold +inf and ends at (1,1). One point per
// distinct score, in descending score order.
struct RocCurve {
  std::vector<RocPoint> points;
};

struct AucReport {
  ClassList classes;
  std::vector<std::optional<double>> per_class;  // absent when P == 0 or Q == 0
  double mean = 0.0;                              // over defined classes only
  std::size_t defined_count = 0;

  std::vector<std::string> undefined_classes() const;
};

// Tie-corrected Mann-Whitney AUC:
//   (sum of average ranks of positives - P(P+1)/2) / (P*Q).
// Returns nullopt when either class is empty.
std::optional<double> auc(std::span<const double> scores, std::span<const std::uint8_t> labels);

// Throws ValidationError for a degenerate (single-class) label vector.
RocCurve roc_curve(std::span<const double> scores, std::span<const std::uint8_t> labels);

double trapezoid_area(const RocCurve& curve);

// Per-class AUC and the unweighted mean over defined classes. Throws
// ValidationError when no class is defined.
AucReport evaluate(const PredictionMatrix& preds, const LabelMatrix& labels);

// Mean AUC only; the DE objective. Same value as evaluate(...).mean.
double mean_auc(const PredictionMatrix& preds, const LabelMatrix& labels);

// {"per_class": {name: value|null, ...}, "mean": v, "defined_count": n}
std::string to_json(const AucReport& report);

// Fixed-width table: one column per class plus "Mean".
std::string format_table(const AucReport& report, const std::string& row_label);

// CSV with header threshold,fpr,tpr.
void write_roc_csv(const RocCurve& curve, const std::filesystem::path& path);

}  // namespace ensemblefuse

#endif  // ENSEMBLEFUSE_METRICS_HPP_
