// decode/beam-search.cc

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

#include "decode/beam-search.h"

#include <algorithm>
#include <cmath>

#include "base/error.h"
#include "ctc/ctc-loss.h"

namespace memarray {
namespace decode {

namespace {

struct Active {
  Hypothesis hyp;
  model::MemArrayModel::State state;
  std::vector<ctc::CtcPrefixState> ctc;
  LmState lm;
};

bool Better(const Hypothesis &a, const Hypothesis &b) {
  if (a.score.joint != b.score.joint) return a.score.joint > b.score.joint;
  if (a.tokens != b.tokens) return a.tokens < b.tokens;
  return a.ended && !b.ended;
}

double ClampLog(double v) { return ctc::IsLogZero(v) ? ctc::kLogZero : v; }

void Refresh(ScoreBreakdown *s, const BeamConfig &cfg) {
  double sum = 0.0;
  for (double c : s->ctc_streams) sum += c;
  s->ctc = sum / static_cast<double>(s->ctc_streams.size());
  s->joint = JointScore(*s, cfg);
}

}  // namespace

void BeamConfig::Validate() const {
  if (beam_width < 1) throw ConfigError("BeamConfig", "beam_width must be >= 1");
  if (ctc_weight < 0.0 || ctc_weight > 1.0)
    throw ConfigError("BeamConfig", StrCat("ctc_weight ", ctc_weight, " outside [0, 1]"));
  if (max_length == 0 && !(max_length_ratio > 0.0))
    throw ConfigError("BeamConfig", "max_length_ratio must be positive");
}

double JointScore(const ScoreBreakdown &s, const BeamConfig &cfg) {
  return (1.0 - cfg.ctc_weight) * s.att + cfg.ctc_weight * s.ctc + cfg.lm_weight * s.lm +
         cfg.length_penalty * static_cast<double>(s.length);
}

void SimplexStats::Add(std::span<const double> w, bool stream_level) {
  double sum = 0.0;
  bool negative = false;
  for (double x : w) {
    sum += x;
    negative |= x < 0.0;
  }
  const double dev = std::abs(sum - 1.0);
  max_deviation = std::max(max_deviation, dev);
  if (dev > 1e-9 || negative) ++violations;
  ++(stream_level ? stream_vectors : frame_vectors);
}

void SimplexStats::Merge(const SimplexStats &o) {
  frame_vectors += o.frame_vectors;
  stream_vectors += o.stream_vectors;
  violations += o.violations;
  max_deviation = std::max(max_deviation, o.max_deviation);
}

std::vector<Hypothesis> BeamSearch(const model::MemArrayModel &model,
                                   const model::StreamBundle &bundle, const BeamConfig &cfg,
                                   const RnnLm *lm, SimplexStats *stats) {
  cfg.Validate();
  if (bundle.inputs.empty()) throw Error("decode", "empty input bundle");
  ad::Tape tape(false);
  auto enc = model.Encode(tape, bundle);
  const size_t N = enc.memories.size();
  const int eos = model.config().decoder.EosId();
  const size_t V = model.config().decoder.OutputDim();
  if (lm && lm->config().vocab_size != model.config().VocabSize())
    throw Error("decode", "language model vocabulary does not match the model");

  std::vector<ctc::CtcPrefixScorer> scorers;
  size_t frames = std::numeric_limits<size_t>::max();
  for (const auto &lp : enc.ctc_log_posteriors) {
    scorers.emplace_back(lp.ToMatrix());
    frames = std::min(frames, lp.Rows());
  }
  const size_t max_len =
      cfg.max_length ? cfg.max_length
                     : std::max<size_t>(1, static_cast<size_t>(std::ceil(
                                               cfg.max_length_ratio * static_cast<double>(frames))));

  Active root;
  root.state = model.InitialState(enc);
  for (const auto &s : scorers) root.ctc.push_back(s.Initial());
  root.hyp.score.ctc_streams.assign(N, 0.0);
  if (lm) root.lm = lm->Initial();
  Refresh(&root.hyp.score, cfg);

  std::vector<Active> beam{std::move(root)};
  std::vector<Hypothesis> ended;
  for (size_t step = 0; step <= max_len && !beam.empty(); ++step) {
    struct Candidate {
      size_t parent;
      int token;
      Hypothesis hyp;
    };
    std::vector<Candidate> cands;
    std::vector<model::MemArrayModel::StepResult> outs;
    for (size_t b = 0; b < beam.size(); ++b) {
      const Active &a = beam[b];
      const int prev = a.hyp.tokens.empty() ? model.config().decoder.SosId() : a.hyp.tokens.back();
      outs.push_back(model.Step(tape, enc, a.state, prev));
      const auto &out = outs.back();
      if (stats) {
        for (const auto &w : out.state.frame_weights) stats->Add(w.Values(), false);
        stats->Add(out.state.beta.Values(), true);
      }
      auto att = out.log_probs.Values();
      std::vector<std::vector<double>> ctc_delta;
      for (size_t i = 0; i < N; ++i) ctc_delta.push_back(scorers[i].ScoreAll(a.ctc[i]));
      const double best_att = *std::max_element(att.begin(), att.end());
      const bool force_eos = step == max_len;
      for (size_t c = 0; c < V; ++c) {
        const int tok = static_cast<int>(c);
        if (force_eos && tok != eos) continue;
        if (!force_eos && tok == eos && att[c] < best_att - cfg.eos_threshold) continue;
        Hypothesis h;
        h.tokens = a.hyp.tokens;
        h.beta = a.hyp.beta;
        auto bv = out.state.beta.Values();
        h.beta.emplace_back(bv.begin(), bv.end());
        h.score = a.hyp.score;
        h.score.att += att[c];
        for (size_t i = 0; i < N; ++i)
          h.score.ctc_streams[i] = ClampLog(a.hyp.score.ctc_streams[i] + ctc_delta[i][c]);
        if (lm) h.score.lm += a.lm.next_log_probs[c];
        if (tok == eos) {
          h.ended = true;
        } else {
          h.tokens.push_back(tok);
          h.score.length += 1;
        }
        Refresh(&h.score, cfg);
        cands.push_back({b, tok, std::move(h)});
      }
    }
    std::sort(cands.begin(), cands.end(),
              [](const Candidate &x, const Candidate &y) { return Better(x.hyp, y.hyp); });
    if (cands.size() > cfg.beam_width) cands.resize(cfg.beam_width);
    std::vector<Active> next;
    for (Candidate &c : cands) {
      if (c.hyp.ended) {
        ended.push_back(std::move(c.hyp));
        continue;
      }
      const Active &parent = beam[c.parent];
      Active a;
      a.state = outs[c.parent].state;
      for (size_t i = 0; i < N; ++i)
        a.ctc.push_back(scorers[i].Extend(parent.ctc[i], c.token).second);
      if (lm) a.lm = lm->ScoreStep(parent.lm, c.token).second;
      a.hyp = std::move(c.hyp);
      next.push_back(std::move(a));
    }
    beam = std::move(next);
    // Every term only decreases with length unless a positive length
    // bonus is in play, so no active hypothesis can overtake the best ended.
    if (!ended.empty() && !beam.empty() && cfg.length_penalty <= 0.0) {
      double best_ended = -std::numeric_limits<double>::infinity();
      for (const auto &h : ended) best_ended = std::max(best_ended, h.score.joint);
      if (best_ended >= beam.front().hyp.score.joint) break;
    }
  }
  std::sort(ended.begin(), ended.end(), Better);
  return ended;
}

ScoreBreakdown ScoreSequence(const model::MemArrayModel &model,
                             const model::StreamBundle &bundle,
                             const std::vector<int> &labels, const BeamConfig &cfg,
                             const RnnLm *lm) {
  ad::Tape tape(false);
  auto enc = model.Encode(tape, bundle);
  ScoreBreakdown s;
  auto state = model.InitialState(enc);
  int prev = model.config().decoder.SosId();
  std::vector<int> targets = labels;
  targets.push_back(model.config().decoder.EosId());
  for (int tok : targets) {
    auto out = model.Step(tape, enc, state, prev);
    s.att += out.log_probs.Values()[tok];
    state = out.state;
    prev = tok;
  }
  for (const auto &lp : enc.ctc_log_posteriors)
    s.ctc_streams.push_back(ClampLog(-ctc::CtcLoss(lp.ToMatrix(), labels)));
  if (lm) s.lm = lm->SequenceLogProb(labels);
  s.length = labels.size();
  Refresh(&s, cfg);
  return s;
}

}  // namespace decode
}  // namespace memarray
