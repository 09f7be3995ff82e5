// nn/decoder.h

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

#ifndef MEMARRAY_NN_DECODER_H_
#define MEMARRAY_NN_DECODER_H_

#include <string>

#include "autodiff/tape.h"
#include "nn/layers.h"
#include "nn/parameter-store.h"

namespace memarray {
namespace nn {

// Token ids: labels are [0, vocab_size); end-of-sentence is vocab_size and
// start-of-sentence is vocab_size + 1 (input side only).
struct DecoderConfig {
  size_t vocab_size = 8;
  size_t embed_dim = 32;
  size_t hidden_units = 64;
  size_t context_dim = 64;

  int EosId() const { return static_cast<int>(vocab_size); }
  int SosId() const { return static_cast<int>(vocab_size) + 1; }
  size_t OutputDim() const { return vocab_size + 1; }
};

// One-layer LSTM decoder.  The LSTM input is the concatenation of the
// previous token's embedding and the current fused context; the output
// distribution over U and eos is a softmax of a linear map of the new state.
class Decoder {
 public:
  static void Register(ParameterStore *store, const std::string &prefix,
                       const DecoderConfig &cfg, Rng *rng);
  Decoder(const ParameterStore &store, const std::string &prefix,
          const DecoderConfig &cfg);

  LstmState InitialState() const { return {init_h_, init_c_}; }

  struct StepResult {
    ad::Tensor log_probs;  // 1 x (vocab_size + 1)
    LstmState state;
  };
  StepResult Step(ad::Tape &tape, const ad::Tensor &context, int prev_token,
                  const LstmState &prev) const;

  const DecoderConfig &config() const { return cfg_; }

 private:
  DecoderConfig cfg_;
  ad::Tensor embedding_;
  ad::Tensor init_h_;
  ad::Tensor init_c_;
  LstmCell cell_;
  Linear output_;
};

}  // namespace nn
}  // namespace memarray

#endif  // MEMARRAY_NN_DECODER_H_
