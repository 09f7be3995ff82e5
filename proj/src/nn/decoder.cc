// nn/decoder.cc

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

#include "nn/decoder.h"

#include "base/error.h"

namespace memarray {
namespace nn {

void Decoder::Register(ParameterStore *store, const std::string &prefix,
                       const DecoderConfig &cfg, Rng *rng) {
  store->AddUniform(prefix + ".embedding", Component::kDecoder,
                    {cfg.vocab_size + 2, cfg.embed_dim}, cfg.embed_dim, rng);
  store->AddUniform(prefix + ".init_h", Component::kDecoder, {1, cfg.hidden_units},
                    cfg.hidden_units, rng);
  store->AddUniform(prefix + ".init_c", Component::kDecoder, {1, cfg.hidden_units},
                    cfg.hidden_units, rng);
  LstmCell::Register(store, prefix + ".lstm", Component::kDecoder,
                     cfg.embed_dim + cfg.context_dim, cfg.hidden_units, rng);
  Linear::Register(store, prefix + ".output", Component::kDecoder, cfg.hidden_units,
                   cfg.OutputDim(), rng);
}

Decoder::Decoder(const ParameterStore &store, const std::string &prefix,
                 const DecoderConfig &cfg)
    : cfg_(cfg),
      embedding_(store.Get(prefix + ".embedding")),
      init_h_(store.Get(prefix + ".init_h")),
      init_c_(store.Get(prefix + ".init_c")),
      cell_(store, prefix + ".lstm"),
      output_(store, prefix + ".output") {}

Decoder::StepResult Decoder::Step(ad::Tape &tape, const ad::Tensor &context,
                                  int prev_token, const LstmState &prev) const {
  if (prev_token < 0 || prev_token > cfg_.SosId() || prev_token == cfg_.EosId())
    throw Error("decoder_step", StrCat("unknown token id ", prev_token));
  if (context.Rows() != 1 || context.Cols() != cfg_.context_dim)
    throw ShapeError("decoder_step", "context " + ad::ShapeString(context.shape()));
  const size_t id = static_cast<size_t>(prev_token);
  ad::Tensor parts[] = {tape.GatherRows(embedding_, std::span<const size_t>(&id, 1)),
                        context};
  ad::Tensor input = tape.Concat(parts, 1);
  StepResult r;
  r.state = cell_.Step(tape, cell_.ProjectInputs(tape, input), prev);
  r.log_probs = tape.LogSoftmax(output_.Forward(tape, r.state.h), 1);
  return r;
}

}  // namespace nn
}  // namespace memarray
