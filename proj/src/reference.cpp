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

#include "ensemblefuse/reference.hpp"

#include <algorithm>

#include "ensemblefuse/detail/loss_terms.hpp"
#include "ensemblefuse/errors.hpp"
#include "ensemblefuse/model_io.hpp"

namespace ensemblefuse::reference {
namespace {

void check(const PredictionMatrix& preds, const LabelMatrix& labels,
           const ClassPrevalence* prevalence, const LossConfig& cfg) {
  io::check_aligned(std::span(&preds, 1), labels);
  if (prevalence && prevalence->rho.size() != preds.n_classes()) {
    throw ValidationError("prevalence length does not match class count");
  }
  cfg.validate();
}

template <typename Term>
double mean_row_sum(const PredictionMatrix& preds, const LabelMatrix& labels, Term term) {
  double total = 0.0;
  for (std::size_t r = 0; r < preds.n_samples(); ++r) {
    double s = 0.0;
    for (std::size_t c = 0; c < preds.n_classes(); ++c) s += term(preds(r, c), labels(r, c) != 0, c);
    total += s;
  }
  return total / static_cast<double>(preds.n_samples());
}

}  // namespace

double wbce_loss(const PredictionMatrix& preds, const LabelMatrix& labels,
                 const ClassPrevalence& prevalence, const LossConfig& cfg) {
  check(preds, labels, &prevalence, cfg);
  return mean_row_sum(preds, labels, [&](double p, bool y, std::size_t c) {
    const double w = detail::entry_weight(y, prevalence.rho[c], cfg.use_class_weights);
    return detail::wbce_term(p, y, w, cfg.prob_clamp_epsilon);
  });
}

double asl_loss(const PredictionMatrix& preds, const LabelMatrix& labels, const LossConfig& cfg) {
  check(preds, labels, nullptr, cfg);
  return mean_row_sum(preds, labels, [&](double p, bool y, std::size_t) {
    return detail::asl_term(p, y, 1.0, cfg);
  });
}

double combined_loss(const PredictionMatrix& preds, const LabelMatrix& labels,
                     const ClassPrevalence& prevalence, const LossConfig& cfg) {
  check(preds, labels, &prevalence, cfg);
  return mean_row_sum(preds, labels, [&](double p, bool y, std::size_t c) {
    const double w = detail::entry_weight(y, prevalence.rho[c], cfg.use_class_weights);
    return detail::asl_term(p, y, w, cfg);
  });
}

Matrix<double> combined_loss_grad(const PredictionMatrix& preds, const LabelMatrix& labels,
                                  const ClassPrevalence& prevalence, const LossConfig& cfg) {
  check(preds, labels, &prevalence, cfg);
  const double inv_n = 1.0 / static_cast<double>(preds.n_samples());
  Matrix<double> grad(preds.n_samples(), preds.n_classes());
  for (std::size_t r = 0; r < preds.n_samples(); ++r) {
    for (std::size_t c = 0; c < preds.n_classes(); ++c) {
      const bool y = labels(r, c) != 0;
      const double w = detail::entry_weight(y, prevalence.rho[c], cfg.use_class_weights);
      grad(r, c) = detail::asl_term_grad(preds(r, c), y, w, cfg) * inv_n;
    }
  }
  return grad;
}

AucReport evaluate(const PredictionMatrix& preds, const LabelMatrix& labels) {
  io::check_aligned(std::span(&preds, 1), labels);
  AucReport report;
  report.classes = preds.classes();
  double sum = 0.0;
  for (std::size_t c = 0; c < preds.n_classes(); ++c) {
    report.per_class.push_back(auc(preds.values().column(c), labels.values().column(c)));
    if (report.per_class.back()) {
      sum += *report.per_class.back();
      ++report.defined_count;
    }
  }
  if (report.defined_count == 0) {
    throw ValidationError("AUC undefined for every class (each class is all-positive or all-negative)");
  }
  report.mean = sum / static_cast<double>(report.defined_count);
  return report;
}

PredictionMatrix fuse(std::span<const PredictionMatrix> preds, const EnsembleWeights& weights) {
  io::check_aligned(preds);
  if (weights.size() != preds.size()) throw ValidationError("weight count does not match model count");
  const auto& ref = preds.front();
  Matrix<double> out(ref.n_samples(), ref.n_classes());
  for (std::size_t r = 0; r < ref.n_samples(); ++r) {
    for (std::size_t c = 0; c < ref.n_classes(); ++c) {
      double s = 0.0;
      for (std::size_t k = 0; k < preds.size(); ++k) s += weights[k] * preds[k](r, c);
      out(r, c) = std::clamp(s, 0.0, 1.0);
    }
  }
  return PredictionMatrix(ref.classes(), std::move(out));
}

}  // namespace ensemblefuse::reference
