// ctc/ctc-loss.h

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

#ifndef MEMARRAY_CTC_CTC_LOSS_H_
#define MEMARRAY_CTC_CTC_LOSS_H_

#include <span>
#include <vector>

#include "autodiff/tape.h"
#include "base/matrix.h"

namespace memarray {
namespace ctc {

// Log-space stand-in for log(0); keeps all arithmetic finite.
constexpr double kLogZero = -1e30;
// Loss reported when no alignment collapses to the labels.
constexpr double kInfiniteLoss = 1e30;

double LogAdd(double a, double b);
inline bool IsLogZero(double v) { return v <= kLogZero * 0.5; }

// Negative log CTC likelihood of `labels` given per-frame log posteriors
// (frames x classes, blank is the last class).  When `grad` is non-null it
// receives d(loss)/d(log_posteriors), i.e. minus the state occupancies.
// Returns kInfiniteLoss (with a zero gradient) when no valid alignment exists.
double CtcLoss(const Matrix &log_posteriors, std::span<const int> labels,
               Matrix *grad = nullptr);

// Tape operation wrapping CtcLoss; the result is a scalar.
ad::Tensor CtcLoss(ad::Tape &tape, const ad::Tensor &log_posteriors,
                   std::span<const int> labels);

// Mean of per-stream CTC losses (one per encoder).
double MultiStreamCtc(std::span<const double> losses);
ad::Tensor MultiStreamCtc(ad::Tape &tape, std::span<const ad::Tensor> losses);

}  // namespace ctc
}  // namespace memarray

#endif  // MEMARRAY_CTC_CTC_LOSS_H_
