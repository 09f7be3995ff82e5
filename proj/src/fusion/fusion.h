// fusion/fusion.h

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

#ifndef MEMARRAY_FUSION_FUSION_H_
#define MEMARRAY_FUSION_FUSION_H_

#include <string>
#include <vector>

#include "data/corpus-synth.h"
#include "decode/decode-io.h"

namespace memarray {
namespace fusion {

// Truncates all streams to the shortest one and averages them frame by
// frame; the result has a single stream 0.
data::Utterance SignalAverage(const data::Utterance &u);
// Truncates to the shortest stream and concatenates along the feature axis
// in stream-id order.
data::Utterance FrameConcat(const data::Utterance &u);

std::vector<data::Utterance> SignalAverage(const std::vector<data::Utterance> &utts);
std::vector<data::Utterance> FrameConcat(const std::vector<data::Utterance> &utts);

// Word transition network: slots[s][k] is the word hypothesis k (in merge
// order) puts in slot s; the empty string is the null word.
struct WordTransitionNetwork {
  std::vector<std::vector<std::string>> slots;
  std::vector<size_t> order;    // merge order as indices into the input
  std::vector<double> weights;  // vote weight per input, in input order
};

struct RoverOptions {
  bool score_weighted = false;  // votes weighted by exp(score - max score)
};

struct RoverInput {
  std::vector<std::string> words;
  double score = 0.0;
};

// Merges the hypotheses in decreasing score order (stable for ties).
WordTransitionNetwork BuildNetwork(const std::vector<RoverInput> &hyps,
                                   const RoverOptions &opts);

// Per-slot plurality vote.  Ties go to the word of the earliest hypothesis
// in merge order; the null word loses every tie.
std::vector<std::string> Vote(const WordTransitionNetwork &net);

std::vector<std::string> Rover(const std::vector<RoverInput> &hyps,
                               const RoverOptions &opts = {});

// Utterance-level ROVER over decode files of N >= 2 systems.  Utterances
// are taken in the order of the first system; every system must cover them.
std::vector<decode::DecodeRecord> RoverRecords(
    const std::vector<std::vector<decode::DecodeRecord>> &systems, const RoverOptions &opts);

}  // namespace fusion
}  // namespace memarray

#endif  // MEMARRAY_FUSION_FUSION_H_
