// decode/rnn-lm.cc

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

#include "decode/rnn-lm.h"

#include "base/config-map.h"
#include "base/error.h"
#include "base/random.h"

namespace memarray {
namespace decode {

std::string LmConfig::ToString() const {
  ConfigMap c;
  c.Set("lm.vocab_size", std::to_string(vocab_size));
  c.Set("lm.embed_dim", std::to_string(embed_dim));
  c.Set("lm.hidden_units", std::to_string(hidden_units));
  return c.ToString();
}

LmConfig LmConfig::FromString(const std::string &text, const std::string &origin) {
  ConfigMap c = ConfigMap::Parse(text, origin);
  LmConfig l;
  l.vocab_size = static_cast<size_t>(c.GetInt("lm.vocab_size", 8));
  l.embed_dim = static_cast<size_t>(c.GetInt("lm.embed_dim", 16));
  l.hidden_units = static_cast<size_t>(c.GetInt("lm.hidden_units", 32));
  if (l.vocab_size < 2 || l.embed_dim == 0 || l.hidden_units == 0)
    throw ConfigError("LmConfig", "bad dimensions in " + origin);
  return l;
}

void RnnLm::Register(nn::ParameterStore *store, const LmConfig &cfg, Rng *rng) {
  store->AddUniform("lm.embedding", nn::Component::kLm, {cfg.vocab_size + 2, cfg.embed_dim},
                    cfg.embed_dim, rng);
  nn::LstmCell::Register(store, "lm.lstm", nn::Component::kLm, cfg.embed_dim,
                         cfg.hidden_units, rng);
  nn::Linear::Register(store, "lm.output", nn::Component::kLm, cfg.hidden_units,
                       cfg.vocab_size + 1, rng);
}

nn::ParameterStore RnnLm::Create(const LmConfig &cfg, uint64_t seed) {
  nn::ParameterStore store;
  Rng rng(seed);
  Register(&store, cfg, &rng);
  store.SetMetadata(cfg.ToString());
  return store;
}

RnnLm::RnnLm(const nn::ParameterStore &store)
    : RnnLm(store, LmConfig::FromString(store.Metadata(), "lm checkpoint")) {}

RnnLm::RnnLm(const nn::ParameterStore &store, const LmConfig &cfg)
    : cfg_(cfg),
      embedding_(store.Get("lm.embedding")),
      cell_(store, "lm.lstm"),
      output_(store, "lm.output") {}

ad::Tensor RnnLm::StepLogits(ad::Tape &tape, int token, nn::LstmState *state) const {
  const size_t id = static_cast<size_t>(token);
  ad::Tensor emb = tape.GatherRows(embedding_, std::span<const size_t>(&id, 1));
  *state = cell_.Step(tape, cell_.ProjectInputs(tape, emb), *state);
  return tape.LogSoftmax(output_.Forward(tape, state->h), 1);
}

LmState RnnLm::Initial() const {
  ad::Tape tape(false);
  LmState s;
  s.lstm = cell_.ZeroState();
  ad::Tensor lp = StepLogits(tape, static_cast<int>(cfg_.vocab_size) + 1, &s.lstm);
  s.next_log_probs.assign(lp.Values().begin(), lp.Values().end());
  return s;
}

std::pair<double, LmState> RnnLm::ScoreStep(const LmState &state, int token) const {
  if (token < 0 || token > EosId())
    throw Error("lm_score_step", StrCat("token ", token, " out of vocabulary"));
  if (state.ended) throw Error("lm_score_step", "state already consumed eos");
  const double lp = state.next_log_probs[token];
  LmState next = state;
  if (token == EosId()) {
    next.ended = true;
    return {lp, next};
  }
  ad::Tape tape(false);
  ad::Tensor out = StepLogits(tape, token, &next.lstm);
  next.next_log_probs.assign(out.Values().begin(), out.Values().end());
  return {lp, next};
}

double RnnLm::SequenceLogProb(const std::vector<int> &labels) const {
  LmState s = Initial();
  double total = 0.0;
  for (int c : labels) {
    auto [lp, n] = ScoreStep(s, c);
    total += lp;
    s = std::move(n);
  }
  return total + ScoreStep(s, EosId()).first;
}

ad::Tensor RnnLm::SequenceLoss(ad::Tape &tape, const std::vector<int> &labels) const {
  nn::LstmState st = cell_.ZeroState();
  int prev = static_cast<int>(cfg_.vocab_size) + 1;
  std::vector<ad::Tensor> terms;
  std::vector<int> targets = labels;
  targets.push_back(EosId());
  for (int c : targets) {
    if (c < 0 || c > EosId()) throw Error("lm", StrCat("token ", c, " out of vocabulary"));
    ad::Tensor lp = StepLogits(tape, prev, &st);
    terms.push_back(tape.Slice(lp, 1, static_cast<size_t>(c), static_cast<size_t>(c) + 1));
    prev = c;
  }
  return tape.Scale(tape.Sum(tape.Concat(terms, 1)), -1.0);
}

}  // namespace decode
}  // namespace memarray
