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

#include "ensemblefuse/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>

#include "ensemblefuse/errors.hpp"
#include "ensemblefuse/model_io.hpp"
#include "json.hpp"

namespace ensemblefuse {
namespace {

void check_score_inputs(std::span<const double> scores, std::span<const std::uint8_t> labels) {
  if (scores.size() != labels.size()) {
    throw ValidationError("scores and labels differ in length (" +
                          std::to_string(scores.size()) + " vs " +
                          std::to_string(labels.size()) + ")");
  }
  for (double s : scores) {
    if (std::isnan(s)) throw ValidationError("score is NaN");
  }
}

// Indices by descending score; ties keep input order.
std::vector<std::size_t> descending_order(std::span<const double> scores) {
  std::vector<std::size_t> idx(scores.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  return idx;
}

}  // namespace

std::vector<std::string> AucReport::undefined_classes() const {
  std::vector<std::string> out;
  for (std::size_t c = 0; c < per_class.size(); ++c) {
    if (!per_class[c]) out.push_back(classes[c]);
  }
  return out;
}

std::optional<double> auc(std::span<const double> scores, std::span<const std::uint8_t> labels) {
  check_score_inputs(scores, labels);
  std::size_t positives = 0;
  for (auto y : labels) positives += (y != 0);
  const std::size_t negatives = labels.size() - positives;
  if (positives == 0 || negatives == 0) return std::nullopt;

  std::vector<std::pair<double, bool>> ranked(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) ranked[i] = {scores[i], labels[i] != 0};
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });

  // Average ranks are half-integers, so the rank sum is exact in double.
  double positive_rank_sum = 0.0;
  std::size_t i = 0;
  while (i < ranked.size()) {
    std::size_t j = i;
    std::size_t group_pos = 0;
    while (j < ranked.size() && ranked[j].first == ranked[i].first) {
      group_pos += ranked[j].second;
      ++j;
    }
    const double avg_rank = 0.5 * static_cast<double>(i + 1 + j);
    positive_rank_sum += avg_rank * static_cast<double>(group_pos);
    i = j;
  }
  const double p = static_cast<double>(positives);
  const double q = static_cast<double>(negatives);
  return (positive_rank_sum - p * (p + 1.0) / 2.0) / (p * q);
}

RocCurve roc_curve(std::span<const double> scores, std::span<const std::uint8_t> labels) {
  check_score_inputs(scores, labels);
  std::size_t positives = 0;
  for (auto y : labels) positives += (y != 0);
  const std::size_t negatives = labels.size() - positives;
  if (positives == 0 || negatives == 0) {
    throw ValidationError("ROC curve undefined: need at least one positive and one negative (P=" +
                          std::to_string(positives) + ", Q=" + std::to_string(negatives) + ")");
  }
  const auto idx = descending_order(scores);
  const double p = static_cast<double>(positives);
  const double q = static_cast<double>(negatives);

  RocCurve curve;
  curve.points.push_back(RocPoint{});
  std::size_t tp = 0, fp = 0, i = 0;
  while (i < idx.size()) {
    const double threshold = scores[idx[i]];
    while (i < idx.size() && scores[idx[i]] == threshold) {
      if (labels[idx[i]] != 0) {
        ++tp;
      } else {
        ++fp;
      }
      ++i;
    }
    curve.points.push_back(
        RocPoint{static_cast<double>(fp) / q, static_cast<double>(tp) / p, threshold});
  }
  return curve;
}

double trapezoid_area(const RocCurve& curve) {
  double area = 0.0;
  for (std::size_t i = 1; i < curve.points.size(); ++i) {
    const auto& a = curve.points[i - 1];
    const auto& b = curve.points[i];
    area += (b.fpr - a.fpr) * (b.tpr + a.tpr) * 0.5;
  }
  return area;
}

AucReport evaluate(const PredictionMatrix& preds, const LabelMatrix& labels) {
  io::check_aligned(std::span(&preds, 1), labels);
  const std::size_t c_count = preds.n_classes();
  AucReport report;
  report.classes = preds.classes();
  report.per_class.resize(c_count);
  const auto n_cls = static_cast<std::ptrdiff_t>(c_count);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t c = 0; c < n_cls; ++c) {
    const auto col = static_cast<std::size_t>(c);
    const auto s = preds.values().column(col);
    const auto y = labels.values().column(col);
    report.per_class[col] = auc(s, y);
  }
  double sum = 0.0;
  for (const auto& v : report.per_class) {
    if (v) {
      sum += *v;
      ++report.defined_count;
    }
  }
  if (report.defined_count == 0) {
    throw ValidationError("AUC undefined for every class (each class is all-positive or all-negative)");
  }
  report.mean = sum / static_cast<double>(report.defined_count);
  return report;
}

double mean_auc(const PredictionMatrix& preds, const LabelMatrix& labels) {
  return evaluate(preds, labels).mean;
}

std::string to_json(const AucReport& report) {
  nlohmann::ordered_json per_class = nlohmann::ordered_json::object();
  for (std::size_t c = 0; c < report.per_class.size(); ++c) {
    per_class[report.classes[c]] =
        report.per_class[c] ? nlohmann::ordered_json(*report.per_class[c]) : nullptr;
  }
  nlohmann::ordered_json doc;
  doc["per_class"] = std::move(per_class);
  doc["mean"] = report.mean;
  doc["defined_count"] = report.defined_count;
  return doc.dump(2) + "\n";
}

std::string format_table(const AucReport& report, const std::string& row_label) {
  std::vector<std::string> headers = report.classes.names();
  headers.push_back("Mean");
  std::vector<std::string> cells;
  char buf[32];
  for (const auto& v : report.per_class) {
    if (v) {
      std::snprintf(buf, sizeof buf, "%.4f", *v);
      cells.emplace_back(buf);
    } else {
      cells.emplace_back("n/a");
    }
  }
  std::snprintf(buf, sizeof buf, "%.4f", report.mean);
  cells.emplace_back(buf);

  const std::size_t label_width = std::max<std::size_t>(row_label.size(), 5);
  std::string head = std::string("Model") + std::string(label_width - 5, ' ');
  std::string body = row_label + std::string(label_width - row_label.size(), ' ');
  for (std::size_t i = 0; i < headers.size(); ++i) {
    const std::size_t w = std::max(headers[i].size(), cells[i].size());
    head += " | " + headers[i] + std::string(w - headers[i].size(), ' ');
    body += " | " + cells[i] + std::string(w - cells[i].size(), ' ');
  }
  return head + "\n" + body + "\n";
}

void write_roc_csv(const RocCurve& curve, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw RuntimeError("cannot open " + path.string() + " for writing");
  out << "threshold,fpr,tpr\n";
  for (const auto& pt : curve.points) {
    out << io::format_double(pt.threshold) << ',' << io::format_double(pt.fpr) << ','
        << io::format_double(pt.tpr) << '\n';
  }
  out.flush();
  if (!out) throw RuntimeError("write failed: " + path.string());
}

}  // namespace ensemblefuse
