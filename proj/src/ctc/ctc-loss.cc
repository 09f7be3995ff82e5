// ctc/ctc-loss.cc

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

#include "ctc/ctc-loss.h"

#include <algorithm>
#include <cmath>

#include "base/error.h"

namespace memarray {
namespace ctc {

double LogAdd(double a, double b) {
  if (a < b) std::swap(a, b);
  if (IsLogZero(b)) return a;
  return a + std::log1p(std::exp(b - a));
}

double CtcLoss(const Matrix &log_posteriors, std::span<const int> labels,
               Matrix *grad) {
  const size_t T = log_posteriors.Rows();
  const size_t C = log_posteriors.Cols();
  if (T == 0) throw Error("ctc_loss", "empty frame sequence");
  if (C < 2) throw Error("ctc_loss", "need at least one label class plus blank");
  const int blank = static_cast<int>(C) - 1;
  for (int l : labels)
    if (l < 0 || l >= blank)
      throw Error("ctc_loss", StrCat("label id ", l, " out of range [0,", blank, ")"));

  // Blank-augmented label sequence: _ l1 _ l2 _ ... lL _.
  const size_t S = 2 * labels.size() + 1;
  std::vector<int> ext(S, blank);
  for (size_t i = 0; i < labels.size(); ++i) ext[2 * i + 1] = labels[i];
  auto can_skip = [&](size_t s) {
    return s >= 2 && ext[s] != blank && ext[s] != ext[s - 2];
  };

  Matrix alpha(T, S, kLogZero);
  alpha(0, 0) = log_posteriors(0, blank);
  if (S > 1) alpha(0, 1) = log_posteriors(0, ext[1]);
  for (size_t t = 1; t < T; ++t) {
    for (size_t s = 0; s < S; ++s) {
      double a = alpha(t - 1, s);
      if (s >= 1) a = LogAdd(a, alpha(t - 1, s - 1));
      if (can_skip(s)) a = LogAdd(a, alpha(t - 1, s - 2));
      alpha(t, s) = IsLogZero(a) ? kLogZero : a + log_posteriors(t, ext[s]);
    }
  }
  double logp = alpha(T - 1, S - 1);
  if (S > 1) logp = LogAdd(logp, alpha(T - 1, S - 2));

  if (grad) *grad = Matrix(T, C, 0.0);
  if (IsLogZero(logp)) return kInfiniteLoss;
  if (!grad) return -logp;

  Matrix beta(T, S, kLogZero);
  beta(T - 1, S - 1) = log_posteriors(T - 1, blank);
  if (S > 1) beta(T - 1, S - 2) = log_posteriors(T - 1, ext[S - 2]);
  for (size_t t = T - 1; t-- > 0;) {
    for (size_t s = 0; s < S; ++s) {
      double b = beta(t + 1, s);
      if (s + 1 < S) b = LogAdd(b, beta(t + 1, s + 1));
      if (s + 2 < S && can_skip(s + 2)) b = LogAdd(b, beta(t + 1, s + 2));
      beta(t, s) = IsLogZero(b) ? kLogZero : b + log_posteriors(t, ext[s]);
    }
  }
  // Occupancy of class k at frame t; alpha and beta both include y_t.
  for (size_t t = 0; t < T; ++t) {
    for (size_t s = 0; s < S; ++s) {
      double ab = alpha(t, s) + beta(t, s);
      if (IsLogZero(alpha(t, s)) || IsLogZero(beta(t, s))) continue;
      (*grad)(t, ext[s]) -= std::exp(ab - log_posteriors(t, ext[s]) - logp);
    }
  }
  return -logp;
}

ad::Tensor CtcLoss(ad::Tape &tape, const ad::Tensor &log_posteriors,
                   std::span<const int> labels) {
  Matrix lp = log_posteriors.ToMatrix();
  Matrix grad;
  const bool need_grad = tape.Recording() && log_posteriors.RequiresGrad();
  double loss = CtcLoss(lp, labels, need_grad ? &grad : nullptr);
  return tape.Custom(
      "ctc_loss", {log_posteriors}, {}, {loss},
      [grad = std::move(grad)](std::span<const double> out_grad,
                               std::span<std::vector<double> *> in_grads) {
        if (!in_grads[0]) return;
        const std::vector<double> &g = grad.Data();
        for (size_t i = 0; i < g.size(); ++i) (*in_grads[0])[i] += out_grad[0] * g[i];
      });
}

double MultiStreamCtc(std::span<const double> losses) {
  if (losses.empty()) throw Error("multi_stream_ctc", "no streams");
  double s = 0.0;
  for (double l : losses) s += l;
  return s / static_cast<double>(losses.size());
}

ad::Tensor MultiStreamCtc(ad::Tape &tape, std::span<const ad::Tensor> losses) {
  if (losses.empty()) throw Error("multi_stream_ctc", "no streams");
  ad::Tensor sum = losses[0];
  for (size_t i = 1; i < losses.size(); ++i) sum = tape.Add(sum, losses[i]);
  return tape.Scale(sum, 1.0 / static_cast<double>(losses.size()));
}

}  // namespace ctc
}  // namespace memarray
