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

#ifndef ENSEMBLEFUSE_REFERENCE_HPP_
#define ENSEMBLEFUSE_REFERENCE_HPP_

#include <span>

#include "ensemblefuse/ensemble.hpp"
#include "ensemblefuse/losses.hpp"
#include "ensemblefuse/metrics.hpp"

// Single-threaded versions of the OpenMP kernels. They share the scalar
// terms with the parallel code and must return bit-identical results; the
// tests and the benchmark compare against them.
namespace ensemblefuse::reference {

double wbce_loss(const PredictionMatrix& preds, const LabelMatrix& labels,
                 const ClassPrevalence& prevalence, const LossConfig& cfg = {});
double asl_loss(const PredictionMatrix& preds, const LabelMatrix& labels,
                const LossConfig& cfg = {});
double combined_loss(const PredictionMatrix& preds, const LabelMatrix& labels,
                     const ClassPrevalence& prevalence, const LossConfig& cfg = {});
Matrix<double> combined_loss_grad(const PredictionMatrix& preds, const LabelMatrix& labels,
                                  const ClassPrevalence& prevalence, const LossConfig& cfg = {});

AucReport evaluate(const PredictionMatrix& preds, const LabelMatrix& labels);

PredictionMatrix fuse(std::span<const PredictionMatrix> preds, const EnsembleWeights& weights);

}  // namespace ensemblefuse::reference

#endif  // ENSEMBLEFUSE_REFERENCE_HPP_
