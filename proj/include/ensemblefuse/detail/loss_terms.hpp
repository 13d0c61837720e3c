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

#ifndef ENSEMBLEFUSE_DETAIL_LOSS_TERMS_HPP_
#define ENSEMBLEFUSE_DETAIL_LOSS_TERMS_HPP_

#include <algorithm>
#include <cmath>

#include "ensemblefuse/losses.hpp"

// Scalar per-entry terms shared by the OpenMP kernels and the serial
// reference loops. Each returns the nonnegative contribution of one
// (sample, class) entry before averaging over samples.
namespace ensemblefuse::detail {

inline double clamp_probability(double p, double eps) {
  return std::clamp(p, eps, 1.0 - eps);
}

inline double wbce_term(double p, bool positive, double weight, double eps) {
  const double pc = clamp_probability(p, eps);
  return positive ? -weight * std::log(pc) : -weight * std::log(1.0 - pc);
}

inline double asl_term(double p, bool positive, double weight, const LossConfig& cfg) {
  const double eps = cfg.prob_clamp_epsilon;
  const double pc = clamp_probability(p, eps);
  if (positive) {
    return -weight * std::pow(1.0 - pc, cfg.gamma_pos) * std::log(pc);
  }
  const double pm = std::max(pc - cfg.margin, 0.0);
  if (pm == 0.0) return 0.0;
  return -weight * std::pow(pm, cfg.gamma_neg) * std::log(std::max(1.0 - pm, eps));
}

inline double asl_term_grad(double p, bool positive, double weight, const LossConfig& cfg) {
  const double eps = cfg.prob_clamp_epsilon;
  if (p < eps || p > 1.0 - eps) return 0.0;
  if (positive) {
    const double q = 1.0 - p;
    const double g = cfg.gamma_pos;
    const double focus = g == 0.0 ? 0.0 : g * std::pow(q, g - 1.0) * std::log(p);
    return weight * (focus - std::pow(q, g) / p);
  }
  if (p <= cfg.margin) return 0.0;
  const double pm = p - cfg.margin;
  const double g = cfg.gamma_neg;
  const double focus = g == 0.0 ? 0.0 : g * std::pow(pm, g - 1.0) * std::log(1.0 - pm);
  return weight * (std::pow(pm, g) / (1.0 - pm) - focus);
}

inline double entry_weight(bool positive, double rho, bool enabled) {
  if (!enabled) return 1.0;
  return positive ? std::exp(1.0 - rho) : std::exp(rho);
}

}  // namespace ensemblefuse::detail

#endif  // ENSEMBLEFUSE_DETAIL_LOSS_TERMS_HPP_
