// ctc/ctc-prefix-score.cc

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

#include "ctc/ctc-prefix-score.h"

#include "base/error.h"
#include "ctc/ctc-loss.h"

namespace memarray {
namespace ctc {

namespace {

inline double Plus(double a, double b) {
  return (IsLogZero(a) || IsLogZero(b)) ? kLogZero : a + b;
}

}  // namespace

CtcPrefixScorer::CtcPrefixScorer(Matrix log_posteriors)
    : log_posteriors_(std::move(log_posteriors)),
      blank_(static_cast<int>(log_posteriors_.Cols()) - 1) {
  if (log_posteriors_.Rows() == 0)
    throw Error("ctc_prefix_score", "empty frame sequence");
  if (log_posteriors_.Cols() < 2)
    throw Error("ctc_prefix_score", "need at least one label class plus blank");
}

CtcPrefixState CtcPrefixScorer::Initial() const {
  const size_t T = NumFrames();
  CtcPrefixState s;
  s.r_nonblank.assign(T, kLogZero);
  s.r_blank.assign(T, kLogZero);
  double acc = 0.0;
  for (size_t t = 0; t < T; ++t) {
    acc = Plus(acc, log_posteriors_(t, blank_));
    s.r_blank[t] = acc;
  }
  s.score = 0.0;
  return s;
}

std::vector<double> CtcPrefixScorer::Phi(const CtcPrefixState &state,
                                         int token) const {
  const size_t T = NumFrames();
  const int last = state.prefix.empty() ? -1 : state.prefix.back();
  std::vector<double> phi(T);
  for (size_t t = 0; t < T; ++t)
    phi[t] = token == last ? state.r_blank[t]
                           : LogAdd(state.r_nonblank[t], state.r_blank[t]);
  return phi;
}

double CtcPrefixScorer::ExtendScore(const CtcPrefixState &state, int token,
                                    const std::vector<double> &phi,
                                    CtcPrefixState *out) const {
  const size_t T = NumFrames();
  if (out) {
    out->r_nonblank.assign(T, kLogZero);
    out->r_blank.assign(T, kLogZero);
  }
  double rn = state.prefix.empty() ? log_posteriors_(0, token) : kLogZero;
  double rb = kLogZero;
  double psi = rn;
  if (out) out->r_nonblank[0] = rn;
  for (size_t t = 1; t < T; ++t) {
    const double y = log_posteriors_(t, token);
    const double new_rn = Plus(LogAdd(rn, phi[t - 1]), y);
    const double new_rb = Plus(LogAdd(rn, rb), log_posteriors_(t, blank_));
    psi = LogAdd(psi, Plus(phi[t - 1], y));
    rn = new_rn;
    rb = new_rb;
    if (out) {
      out->r_nonblank[t] = rn;
      out->r_blank[t] = rb;
    }
  }
  return IsLogZero(psi) ? kLogZero : psi;
}

std::pair<double, CtcPrefixState> CtcPrefixScorer::Extend(
    const CtcPrefixState &state, int token) const {
  if (token < 0 || token > blank_)
    throw Error("ctc_prefix_score", StrCat("token id ", token, " out of range"));
  const size_t T = NumFrames();
  CtcPrefixState next;
  next.prefix = state.prefix;
  if (token == blank_) {
    // End of sentence: full-sequence probability of the prefix.
    next.score = LogAdd(state.r_nonblank[T - 1], state.r_blank[T - 1]);
    next.r_nonblank = state.r_nonblank;
    next.r_blank = state.r_blank;
    return {next.score - state.score, std::move(next)};
  }
  std::vector<double> phi = Phi(state, token);
  next.score = ExtendScore(state, token, phi, &next);
  next.prefix.push_back(token);
  return {next.score - state.score, std::move(next)};
}

std::vector<double> CtcPrefixScorer::ScoreAll(const CtcPrefixState &state) const {
  const size_t T = NumFrames();
  std::vector<double> out(blank_ + 1);
  const int last = state.prefix.empty() ? -1 : state.prefix.back();
  std::vector<double> phi_diff = Phi(state, -1);  // token never equals last
  std::vector<double> phi_same;
  if (last >= 0) phi_same = state.r_blank;
  for (int c = 0; c < blank_; ++c) {
    const auto &phi = c == last ? phi_same : phi_diff;
    out[c] = ExtendScore(state, c, phi, nullptr) - state.score;
  }
  out[blank_] = LogAdd(state.r_nonblank[T - 1], state.r_blank[T - 1]) - state.score;
  return out;
}

}  // namespace ctc
}  // namespace memarray
