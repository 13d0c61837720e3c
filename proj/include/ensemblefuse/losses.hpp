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

#ifndef ENSEMBLEFUSE_LOSSES_HPP_
#define ENSEMBLEFUSE_LOSSES_HPP_

#include <vector>

#include "ensemblefuse/matrix.hpp"

namespace ensemblefuse {

// Per-class fraction of positive samples, rho[i] = positives_i / N.
struct ClassPrevalence {
  std::vector<double> rho;
};

// Hyperparameters of the combined weighted / asymmetric loss.
struct LossConfig {
  double gamma_pos = 1.0;  // focusing exponent on positives
  double gamma_neg = 4.0;  // focusing exponent on negatives
  double margin = 0.05;    // probability shift on negatives, p_m = max(p - margin, 0)
  bool use_class_weights = true;
  double prob_clamp_epsilon = 1e-7;

  // Plain (unweighted, unfocused) binary cross-entropy.
  static LossConfig bce() { return {0.0, 0.0, 0.0, false, 1e-7}; }

  // Throws ValidationError when a field is out of range.
  void validate() const;
};

ClassPrevalence compute_prevalence(const LabelMatrix& labels);

// e^(1 - rho) for a positive label, e^rho for a negative one. Rarer classes
// get larger positive weights.
double sample_class_weight(int y, double rho);

// All losses below are per-sample sums over classes, averaged over samples.
// Probabilities are clamped to [eps, 1 - eps] before any logarithm.
//
// wbce_loss honours cfg.use_class_weights and cfg.prob_clamp_epsilon only.
double wbce_loss(const PredictionMatrix& preds, const LabelMatrix& labels,
                 const ClassPrevalence& prevalence, const LossConfig& cfg = {});

// Asymmetric focal loss; never class weighted.
double asl_loss(const PredictionMatrix& preds, const LabelMatrix& labels,
                const LossConfig& cfg = {});

// Class-weighted asymmetric loss (weights dropped if !use_class_weights).
double combined_loss(const PredictionMatrix& preds, const LabelMatrix& labels,
                     const ClassPrevalence& prevalence, const LossConfig& cfg = {});

// d(combined_loss)/d(p_ij). Zero inside clamped regions and for negatives
// with p <= margin (the one-sided derivative at the kink).
Matrix<double> combined_loss_grad(const PredictionMatrix& preds, const LabelMatrix& labels,
                                  const ClassPrevalence& prevalence, const LossConfig& cfg = {});

}  // namespace ensemblefuse

#endif  // ENSEMBLEFUSE_LOSSES_HPP_
