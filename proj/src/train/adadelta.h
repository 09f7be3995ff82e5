// train/adadelta.h

// Copyright 2026  The memarray authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef MEMARRAY_TRAIN_ADADELTA_H_
#define MEMARRAY_TRAIN_ADADELTA_H_

#include <vector>

#include "nn/parameter-store.h"

namespace memarray {
namespace train {

struct AdaDeltaConfig {
  double rho = 0.95;
  double epsilon = 1e-8;
  double learning_rate = 1.0;
  double clip_norm = 5.0;  // global gradient norm; <= 0 disables
};

// Per-parameter adaptive updates:
//   E[g^2] <- rho E[g^2] + (1 - rho) g^2
//   dx = -sqrt(E[dx^2] + eps) / sqrt(E[g^2] + eps) * g
//   E[dx^2] <- rho E[dx^2] + (1 - rho) dx^2
// Frozen components are skipped entirely.
class AdaDelta {
 public:
  explicit AdaDelta(const AdaDeltaConfig &cfg) : cfg_(cfg) {}

  // Clips the gradients of `store` in place and applies one update.  Returns
  // the gradient norm before clipping.
  double Step(nn::ParameterStore *store);

 private:
  AdaDeltaConfig cfg_;
  std::vector<std::vector<double>> acc_grad_;
  std::vector<std::vector<double>> acc_update_;
};

double GradientNorm(const nn::ParameterStore &store);

}  // namespace train
}  // namespace memarray

#endif  // MEMARRAY_TRAIN_ADADELTA_H_
