// decode/beam-search.h

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

#ifndef MEMARRAY_DECODE_BEAM_SEARCH_H_
#define MEMARRAY_DECODE_BEAM_SEARCH_H_

#include <limits>
#include <vector>

#include "ctc/ctc-prefix-score.h"
#include "decode/rnn-lm.h"
#include "model/model.h"

namespace memarray {
namespace decode {

struct BeamConfig {
  size_t beam_width = 4;
  double ctc_weight = 0.3;  // lambda at decode time
  double lm_weight = 0.0;   // gamma
  double length_penalty = 0.0;
  double max_length_ratio = 1.5;  // times the encoder frame count
  size_t max_length = 0;          // overrides the ratio when nonzero
  // eos is only proposed when its attention log-prob is within this many
  // nats of the best token; infinity turns the rule off.
  double eos_threshold = 5.0;

  void Validate() const;
};

struct ScoreBreakdown {
  double att = 0.0;
  std::vector<double> ctc_streams;  // cumulative prefix score per stream
  double ctc = 0.0;                 // mean of ctc_streams
  double lm = 0.0;
  size_t length = 0;  // labels, eos excluded
  double joint = 0.0;
};

// Recomputes the joint score from its parts.
double JointScore(const ScoreBreakdown &s, const BeamConfig &cfg);

struct Hypothesis {
  std::vector<int> tokens;  // labels, eos excluded
  ScoreBreakdown score;
  bool ended = false;
  // Per output step (eos included): the stream weights.
  std::vector<std::vector<double>> beta;
};

// Sum-to-one bookkeeping over every attention weight vector computed during
// a decode.
struct SimplexStats {
  size_t frame_vectors = 0;
  size_t stream_vectors = 0;
  size_t violations = 0;  // |sum - 1| > 1e-9 or a negative weight
  double max_deviation = 0.0;
  void Add(std::span<const double> w, bool stream_level);
  void Merge(const SimplexStats &o);
};

// Label-synchronous joint CTC/attention beam search.  Returns the ended
// hypotheses ranked by joint score, ties broken by token ids.
std::vector<Hypothesis> BeamSearch(const model::MemArrayModel &model,
                                   const model::StreamBundle &bundle,
                                   const BeamConfig &cfg, const RnnLm *lm = nullptr,
                                   SimplexStats *stats = nullptr);

// Joint score of a fixed label sequence under the same scoring as
// BeamSearch (teacher-forced attention, full CTC, LM).
ScoreBreakdown ScoreSequence(const model::MemArrayModel &model,
                             const model::StreamBundle &bundle,
                             const std::vector<int> &labels, const BeamConfig &cfg,
                             const RnnLm *lm = nullptr);

}  // namespace decode
}  // namespace memarray

#endif  // MEMARRAY_DECODE_BEAM_SEARCH_H_
