// decode/rnn-lm.h

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

#ifndef MEMARRAY_DECODE_RNN_LM_H_
#define MEMARRAY_DECODE_RNN_LM_H_

#include <string>
#include <utility>
#include <vector>

#include "autodiff/tape.h"
#include "nn/layers.h"
#include "nn/parameter-store.h"

namespace memarray {
namespace decode {

// Character-level LSTM language model over U and eos, with sos as the first
// input.  Ids follow the decoder: eos = vocab_size, sos = vocab_size + 1.
struct LmConfig {
  size_t vocab_size = 8;
  size_t embed_dim = 16;
  size_t hidden_units = 32;

  std::string ToString() const;
  static LmConfig FromString(const std::string &text, const std::string &origin);
};

struct LmState {
  nn::LstmState lstm;
  std::vector<double> next_log_probs;  // over U and eos
  bool ended = false;
};

class RnnLm {
 public:
  static void Register(nn::ParameterStore *store, const LmConfig &cfg, Rng *rng);
  static nn::ParameterStore Create(const LmConfig &cfg, uint64_t seed);

  explicit RnnLm(const nn::ParameterStore &store);
  RnnLm(const nn::ParameterStore &store, const LmConfig &cfg);

  const LmConfig &config() const { return cfg_; }
  int EosId() const { return static_cast<int>(cfg_.vocab_size); }

  LmState Initial() const;
  // (log p(token | history), state after consuming token).
  std::pair<double, LmState> ScoreStep(const LmState &state, int token) const;
  // Total log probability of labels followed by eos.
  double SequenceLogProb(const std::vector<int> &labels) const;
  // Negative log likelihood of labels + eos, on the tape.
  ad::Tensor SequenceLoss(ad::Tape &tape, const std::vector<int> &labels) const;

 private:
  ad::Tensor StepLogits(ad::Tape &tape, int token, nn::LstmState *state) const;

  LmConfig cfg_;
  ad::Tensor embedding_;
  nn::LstmCell cell_;
  nn::Linear output_;
};

}  // namespace decode
}  // namespace memarray

#endif  // MEMARRAY_DECODE_RNN_LM_H_
