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

#include "ensemblefuse/losses.hpp"

#include <cmath>
#include <cstddef>
#include <span>
#include <string>

#include "ensemblefuse/detail/loss_terms.hpp"
#include "ensemblefuse/errors.hpp"
#include "ensemblefuse/model_io.hpp"

namespace ensemblefuse {
namespace {

void check_inputs(const PredictionMatrix& preds, const LabelMatrix& labels) {
  io::check_aligned(std::span(&preds, 1), labels);
}

void check_prevalence(const PredictionMatrix& preds, const ClassPrevalence& prevalence) {
  if (prevalence.rho.size() != preds.n_classes()) {
    throw ValidationError("prevalence has " + std::to_string(prevalence.rho.size()) +
                          " entries for " + std::to_string(preds.n_classes()) + " classes");
  }
}

// Evaluates `term(p, y, class)` on every entry, sums each row in class
// order, then reduces rows in index order. Rows run in parallel; the fixed
// reduction order keeps the result identical to the serial reference.
template <typename Term>
double mean_row_sum(const PredictionMatrix& preds, const LabelMatrix& labels, Term term) {
  const auto n = static_cast<std::ptrdiff_t>(preds.n_samples());
  const std::size_t c_count = preds.n_classes();
  std::vector<double> row_sum(preds.n_samples());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t r = 0; r < n; ++r) {
    const auto p = preds.values().row(static_cast<std::size_t>(r));
    const auto y = labels.values().row(static_cast<std::size_t>(r));
    double s = 0.0;
    for (std::size_t c = 0; c < c_count; ++c) s += term(p[c], y[c] != 0, c);
    row_sum[static_cast<std::size_t>(r)] = s;
  }
  double total = 0.0;
  for (double v : row_sum) total += v;
  return total / static_cast<double>(n);
}

}  // namespace

void LossConfig::validate() const {
  if (!(gamma_pos >= 0.0) || !std::isfinite(gamma_pos)) {
    throw ValidationError("gamma_pos must be a finite nonnegative number");
  }
  if (!(gamma_neg >= 0.0) || !std::isfinite(gamma_neg)) {
    throw ValidationError("gamma_neg must be a finite nonnegative number");
  }
  if (!(margin >= 0.0 && margin < 1.0)) throw ValidationError("margin must lie in [0,1)");
  if (!(prob_clamp_epsilon > 0.0 && prob_clamp_epsilon < 0.5)) {
    throw ValidationError("prob_clamp_epsilon must lie in (0,0.5)");
  }
}

ClassPrevalence compute_prevalence(const LabelMatrix& labels) {
  ClassPrevalence out;
  out.rho.assign(labels.n_classes(), 0.0);
  std::vector<std::size_t> positives(labels.n_classes(), 0);
  for (std::size_t r = 0; r < labels.n_samples(); ++r) {
    const auto row = labels.values().row(r);
    for (std::size_t c = 0; c < row.size(); ++c) positives[c] += row[c];
  }
  for (std::size_t c = 0; c < positives.size(); ++c) {
    out.rho[c] = static_cast<double>(positives[c]) / static_cast<double>(labels.n_samples());
  }
  return out;
}

double sample_class_weight(int y, double rho) {
  return detail::entry_weight(y != 0, rho, true);
}

double wbce_loss(const PredictionMatrix& preds, const LabelMatrix& labels,
                 const ClassPrevalence& prevalence, const LossConfig& cfg) {
  check_inputs(preds, labels);
  check_prevalence(preds, prevalence);
  cfg.validate();
  const double eps = cfg.prob_clamp_epsilon;
  const bool weighted = cfg.use_class_weights;
  const auto& rho = prevalence.rho;
  return mean_row_sum(preds, labels, [&](double p, bool y, std::size_t c) {
    return detail::wbce_term(p, y, detail::entry_weight(y, rho[c], weighted), eps);
  });
}

double asl_loss(const PredictionMatrix& preds, const LabelMatrix& labels, const LossConfig& cfg) {
  check_inputs(preds, labels);
  cfg.validate();
  return mean_row_sum(preds, labels, [&](double p, bool y, std::size_t) {
    return detail::asl_term(p, y, 1.0, cfg);
  });
}

double combined_loss(const PredictionMatrix& preds, const LabelMatrix& labels,
                     const ClassPrevalence& prevalence, const LossConfig& cfg) {
  check_inputs(preds, labels);
  check_prevalence(preds, prevalence);
  cfg.validate();
  const auto& rho = prevalence.rho;
  return mean_row_sum(preds, labels, [&](double p, bool y, std::size_t c) {
    return detail::asl_term(p, y, detail::entry_weight(y, rho[c], cfg.use_class_weights), cfg);
  });
}

Matrix<double> combined_loss_grad(const PredictionMatrix& preds, const LabelMatrix& labels,
                                  const ClassPrevalence& prevalence, const LossConfig& cfg) {
  check_inputs(preds, labels);
  check_prevalence(preds, prevalence);
  cfg.validate();
  const auto n = static_cast<std::ptrdiff_t>(preds.n_samples());
  const double inv_n = 1.0 / static_cast<double>(n);
  const std::size_t c_count = preds.n_classes();
  Matrix<double> grad(preds.n_samples(), c_count);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t r = 0; r < n; ++r) {
    const auto row = static_cast<std::size_t>(r);
    const auto p = preds.values().row(row);
    const auto y = labels.values().row(row);
    auto g = grad.row(row);
    for (std::size_t c = 0; c < c_count; ++c) {
      const bool pos = y[c] != 0;
      const double w = detail::entry_weight(pos, prevalence.rho[c], cfg.use_class_weights);
      g[c] = detail::asl_term_grad(p[c], pos, w, cfg) * inv_n;
    }
  }
  return grad;
}

}  // namespace ensemblefuse
