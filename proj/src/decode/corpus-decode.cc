// decode/corpus-decode.cc

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

#include "decode/corpus-decode.h"

#include "data/vocabulary.h"

namespace memarray {
namespace decode {

std::vector<DecodeRecord> DecodeBundles(const model::MemArrayModel &model,
                                        const std::vector<model::StreamBundle> &bundles,
                                        const BeamConfig &cfg, const RnnLm *lm,
                                        SimplexStats *stats) {
  data::Vocabulary vocab(model.config().VocabSize());
  std::vector<DecodeRecord> out;
  for (const auto &b : bundles) {
    auto hyps = BeamSearch(model, b, cfg, lm, stats);
    DecodeRecord r;
    r.utterance_id = b.utterance_id;
    if (!hyps.empty()) {
      const Hypothesis &h = hyps.front();
      r.text = vocab.Decode(h.tokens);
      r.joint = h.score.joint;
      r.att = h.score.att;
      r.ctc = h.score.ctc;
      r.lm = h.score.lm;
      r.beta = h.beta;
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<std::pair<std::string, std::string>> References(
    const std::vector<model::StreamBundle> &bundles, size_t vocab_size) {
  data::Vocabulary vocab(vocab_size);
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto &b : bundles) out.emplace_back(b.utterance_id, vocab.Decode(b.labels));
  return out;
}

std::vector<std::pair<std::string, std::string>> Hypotheses(
    const std::vector<DecodeRecord> &records) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto &r : records) out.emplace_back(r.utterance_id, r.text);
  return out;
}

}  // namespace decode
}  // namespace memarray
