// train/adadelta.cc

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

#include "train/adadelta.h"

#include <cmath>

namespace memarray {
namespace train {

namespace {

bool Trainable(const nn::ParameterStore &store, const nn::ParameterStore::Entry &e) {
  return !store.IsFrozen(e.component) && e.tensor.RequiresGrad();
}

}  // namespace

double GradientNorm(const nn::ParameterStore &store) {
  double sq = 0.0;
  for (const auto &e : store.Entries()) {
    if (!Trainable(store, e) || !e.tensor.Data()->grad.size()) continue;
    for (double g : e.tensor.Data()->grad) sq += g * g;
  }
  return std::sqrt(sq);
}

double AdaDelta::Step(nn::ParameterStore *store) {
  const auto &entries = store->Entries();
  if (acc_grad_.empty()) {
    for (const auto &e : entries) {
      acc_grad_.emplace_back(e.tensor.Size(), 0.0);
      acc_update_.emplace_back(e.tensor.Size(), 0.0);
    }
  }
  const double norm = GradientNorm(*store);
  const double scale =
      cfg_.clip_norm > 0.0 && norm > cfg_.clip_norm ? cfg_.clip_norm / norm : 1.0;
  for (size_t k = 0; k < entries.size(); ++k) {
    const auto &e = entries[k];
    if (!Trainable(*store, e)) continue;
    const auto &grad = e.tensor.Data()->grad;
    if (grad.empty()) continue;
    auto &value = e.tensor.Data()->value;
    auto &eg = acc_grad_[k];
    auto &ex = acc_update_[k];
    for (size_t i = 0; i < value.size(); ++i) {
      const double g = grad[i] * scale;
      eg[i] = cfg_.rho * eg[i] + (1.0 - cfg_.rho) * g * g;
      const double dx = -std::sqrt(ex[i] + cfg_.epsilon) / std::sqrt(eg[i] + cfg_.epsilon) * g;
      ex[i] = cfg_.rho * ex[i] + (1.0 - cfg_.rho) * dx * dx;
      value[i] += cfg_.learning_rate * dx;
    }
  }
  return norm;
}

}  // namespace train
}  // namespace memarray
