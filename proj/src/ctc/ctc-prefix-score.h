// ctc/ctc-prefix-score.h

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

#ifndef MEMARRAY_CTC_CTC_PREFIX_SCORE_H_
#define MEMARRAY_CTC_CTC_PREFIX_SCORE_H_

#include <utility>
#include <vector>

#include "base/matrix.h"

namespace memarray {
namespace ctc {

// Prefix probabilities for label-synchronous decoding.  For a prefix g the
// state holds, per frame t, the log probability of all alignments of frames
// 0..t that collapse to g and end in a non-blank (r_nonblank) or a blank
// (r_blank) symbol; `score` is log P(output starts with g).
struct CtcPrefixState {
  std::vector<int> prefix;
  std::vector<double> r_nonblank;
  std::vector<double> r_blank;
  double score = 0.0;
};

class CtcPrefixScorer {
 public:
  // `log_posteriors` is frames x (|U| + 1) with blank last.  The id |U| passed
  // to Extend() denotes end-of-sentence.
  explicit CtcPrefixScorer(Matrix log_posteriors);

  int EosId() const { return blank_; }
  size_t NumFrames() const { return log_posteriors_.Rows(); }

  CtcPrefixState Initial() const;

  // Returns (score(g + token) - score(g), state for g + token).  For the
  // end-of-sentence id the new score is the full sequence probability
  // log p_ctc(g) and the returned state is terminal.
  std::pair<double, CtcPrefixState> Extend(const CtcPrefixState &state,
                                           int token) const;

  // Scores every token at once, sharing the phi computation.  Element k of
  // the result is the delta for token k (k = EosId() for end-of-sentence).
  std::vector<double> ScoreAll(const CtcPrefixState &state) const;

 private:
  double ExtendScore(const CtcPrefixState &state, int token,
                     const std::vector<double> &phi, CtcPrefixState *out) const;
  std::vector<double> Phi(const CtcPrefixState &state, int token) const;

  Matrix log_posteriors_;
  int blank_;
};

}  // namespace ctc
}  // namespace memarray

#endif  // MEMARRAY_CTC_CTC_PREFIX_SCORE_H_
