// fusion/fusion.cc

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

#include "fusion/fusion.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "base/error.h"
#include "base/text-utils.h"

namespace memarray {
namespace fusion {

namespace {

size_t MinFrames(const data::Utterance &u, const char *where) {
  if (u.streams.empty()) throw Error(where, u.id + ": empty bundle");
  size_t T = std::numeric_limits<size_t>::max();
  for (const auto &s : u.streams) T = std::min(T, s.frames.Rows());
  if (T == 0) throw Error(where, u.id + ": empty stream");
  return T;
}

data::Utterance SingleStreamLike(const data::Utterance &u) {
  data::Utterance out;
  out.id = u.id;
  out.transcript = u.transcript;
  out.labels = u.labels;
  out.prototype_seed = u.prototype_seed;
  return out;
}

}  // namespace

data::Utterance SignalAverage(const data::Utterance &u) {
  const size_t T = MinFrames(u, "signal_average");
  const size_t D = u.streams[0].frames.Cols();
  Matrix avg(T, D, 0.0);
  for (const auto &s : u.streams) {
    if (s.frames.Cols() != D) throw ShapeError("signal_average", u.id + ": dimension mismatch");
    for (size_t t = 0; t < T; ++t)
      for (size_t d = 0; d < D; ++d) avg(t, d) += s.frames(t, d);
  }
  const double n = static_cast<double>(u.streams.size());
  for (double &v : avg.Data()) v /= n;
  data::Utterance out = SingleStreamLike(u);
  data::FeatureSequence fs;
  fs.kind = u.streams[0].kind;
  fs.utterance_id = u.id;
  fs.frames = std::move(avg);
  out.streams.push_back(std::move(fs));
  return out;
}

data::Utterance FrameConcat(const data::Utterance &u) {
  const size_t T = MinFrames(u, "frame_concat");
  std::vector<const data::FeatureSequence *> order;
  for (const auto &s : u.streams) order.push_back(&s);
  std::stable_sort(order.begin(), order.end(),
                   [](auto *a, auto *b) { return a->stream_id < b->stream_id; });
  size_t D = 0;
  for (auto *s : order) D += s->frames.Cols();
  Matrix cat(T, D);
  size_t off = 0;
  for (auto *s : order) {
    for (size_t t = 0; t < T; ++t)
      for (size_t d = 0; d < s->frames.Cols(); ++d) cat(t, off + d) = s->frames(t, d);
    off += s->frames.Cols();
  }
  data::Utterance out = SingleStreamLike(u);
  data::FeatureSequence fs;
  fs.kind = u.streams[0].kind;
  fs.utterance_id = u.id;
  fs.frames = std::move(cat);
  out.streams.push_back(std::move(fs));
  return out;
}

std::vector<data::Utterance> SignalAverage(const std::vector<data::Utterance> &utts) {
  std::vector<data::Utterance> out;
  for (const auto &u : utts) out.push_back(SignalAverage(u));
  return out;
}

std::vector<data::Utterance> FrameConcat(const std::vector<data::Utterance> &utts) {
  std::vector<data::Utterance> out;
  for (const auto &u : utts) out.push_back(FrameConcat(u));
  return out;
}

WordTransitionNetwork BuildNetwork(const std::vector<RoverInput> &hyps,
                                   const RoverOptions &opts) {
  if (hyps.size() < 2) throw Error("rover", "need at least 2 hypotheses");
  WordTransitionNetwork net;
  net.order.resize(hyps.size());
  std::iota(net.order.begin(), net.order.end(), 0);
  std::stable_sort(net.order.begin(), net.order.end(),
                   [&](size_t a, size_t b) { return hyps[a].score > hyps[b].score; });
  double best = -std::numeric_limits<double>::infinity();
  for (const auto &h : hyps) best = std::max(best, h.score);
  for (const auto &h : hyps)
    net.weights.push_back(opts.score_weighted ? std::exp(h.score - best) : 1.0);

  for (size_t m = 0; m < net.order.size(); ++m) {
    const auto &words = hyps[net.order[m]].words;
    for (const auto &w : words)
      if (w.empty()) throw Error("rover", "empty word in hypothesis");
    if (m == 0) {
      for (const auto &w : words) net.slots.push_back({w});
      continue;
    }
    // Edit distance between slot columns and the new words.
    const auto &slots = net.slots;
    const size_t S = slots.size(), W = words.size();
    auto has = [&](size_t s, const std::string &w) {
      return std::find(slots[s].begin(), slots[s].end(), w) != slots[s].end();
    };
    std::vector<std::vector<size_t>> cost(S + 1, std::vector<size_t>(W + 1, 0));
    for (size_t s = 1; s <= S; ++s) cost[s][0] = cost[s - 1][0] + (has(s - 1, "") ? 0 : 1);
    for (size_t j = 1; j <= W; ++j) cost[0][j] = j;
    for (size_t s = 1; s <= S; ++s)
      for (size_t j = 1; j <= W; ++j) {
        const size_t diag = cost[s - 1][j - 1] + (has(s - 1, words[j - 1]) ? 0 : 1);
        const size_t skip = cost[s - 1][j] + (has(s - 1, "") ? 0 : 1);
        const size_t ins = cost[s][j - 1] + 1;
        cost[s][j] = std::min({diag, skip, ins});
      }
    // Trace back, preferring match/substitution, then skip, then insertion.
    std::vector<std::vector<std::string>> merged;
    size_t s = S, j = W;
    while (s > 0 || j > 0) {
      if (s > 0 && j > 0 &&
          cost[s][j] == cost[s - 1][j - 1] + (has(s - 1, words[j - 1]) ? 0 : 1)) {
        auto col = slots[s - 1];
        col.push_back(words[j - 1]);
        merged.push_back(std::move(col));
        --s, --j;
      } else if (s > 0 && cost[s][j] == cost[s - 1][j] + (has(s - 1, "") ? 0 : 1)) {
        auto col = slots[s - 1];
        col.push_back("");
        merged.push_back(std::move(col));
        --s;
      } else {
        std::vector<std::string> col(m, "");
        col.push_back(words[j - 1]);
        merged.push_back(std::move(col));
        --j;
      }
    }
    std::reverse(merged.begin(), merged.end());
    net.slots = std::move(merged);
  }
  return net;
}

std::vector<std::string> Vote(const WordTransitionNetwork &net) {
  std::vector<std::string> out;
  for (const auto &slot : net.slots) {
    std::map<std::string, double> votes;
    for (size_t k = 0; k < slot.size(); ++k) votes[slot[k]] += net.weights[net.order[k]];
    double top = 0.0;
    for (const auto &[w, v] : votes) top = std::max(top, v);
    std::string winner;
    bool found = false;
    // Earliest non-null candidate in merge order among the tied leaders.
    for (size_t k = 0; k < slot.size() && !found; ++k)
      if (!slot[k].empty() && votes[slot[k]] == top) {
        winner = slot[k];
        found = true;
      }
    if (found) out.push_back(winner);
  }
  return out;
}

std::vector<std::string> Rover(const std::vector<RoverInput> &hyps, const RoverOptions &opts) {
  return Vote(BuildNetwork(hyps, opts));
}

std::vector<decode::DecodeRecord> RoverRecords(
    const std::vector<std::vector<decode::DecodeRecord>> &systems, const RoverOptions &opts) {
  if (systems.size() < 2) throw Error("rover", "need at least 2 systems");
  std::vector<std::map<std::string, const decode::DecodeRecord *>> index(systems.size());
  for (size_t k = 0; k < systems.size(); ++k)
    for (const auto &r : systems[k])
      if (!index[k].emplace(r.utterance_id, &r).second)
        throw Error("rover", "duplicate utterance " + r.utterance_id);
  std::vector<decode::DecodeRecord> out;
  for (const auto &r0 : systems[0]) {
    std::vector<RoverInput> in;
    for (size_t k = 0; k < systems.size(); ++k) {
      auto it = index[k].find(r0.utterance_id);
      if (it == index[k].end())
        throw Error("rover", StrCat("system ", k, " has no hypothesis for ", r0.utterance_id));
      in.push_back({SplitWords(NormalizeText(it->second->text)), it->second->joint});
    }
    decode::DecodeRecord r;
    r.utterance_id = r0.utterance_id;
    r.text = Join(Rover(in, opts), " ");
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace fusion
}  // namespace memarray
