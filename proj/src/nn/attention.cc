// nn/attention.cc

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

#include "nn/attention.h"

#include "base/error.h"

namespace memarray {
namespace nn {

const char *AttentionTypeName(AttentionType t) {
  return t == AttentionType::kContent ? "content" : "location";
}

AttentionType ParseAttentionType(const std::string &s) {
  if (s == "content") return AttentionType::kContent;
  if (s == "location") return AttentionType::kLocation;
  throw ConfigError("AttentionConfig", "unknown attention type " + s);
}

void AttentionConfig::ToConfig(const std::string &prefix, ConfigMap *cfg) const {
  cfg->Set(prefix + "type", AttentionTypeName(type));
  cfg->Set(prefix + "dim", std::to_string(attention_dim));
  cfg->Set(prefix + "conv_channels", std::to_string(conv_channels));
  cfg->Set(prefix + "conv_width", std::to_string(conv_width));
}

AttentionConfig AttentionConfig::FromConfig(const ConfigMap &cfg,
                                            const std::string &prefix,
                                            const AttentionConfig &defaults) {
  AttentionConfig a;
  a.type = ParseAttentionType(cfg.GetString(prefix + "type", AttentionTypeName(defaults.type)));
  a.attention_dim = static_cast<size_t>(cfg.GetInt(prefix + "dim", defaults.attention_dim));
  a.conv_channels =
      static_cast<size_t>(cfg.GetInt(prefix + "conv_channels", defaults.conv_channels));
  a.conv_width = static_cast<size_t>(cfg.GetInt(prefix + "conv_width", defaults.conv_width));
  if (a.attention_dim == 0 || a.conv_channels == 0 || a.conv_width == 0)
    throw ConfigError("AttentionConfig", "dimensions must be positive");
  return a;
}

AttentionResult AttendWithScores(ad::Tape &tape, const ad::Tensor &scores,
                                 const ad::Tensor &memory) {
  if (scores.Rows() != memory.Rows() || scores.Cols() != 1)
    throw ShapeError("attend", "scores " + ad::ShapeString(scores.shape()) +
                                   " vs memory " + ad::ShapeString(memory.shape()));
  AttentionResult r;
  r.weights = tape.Softmax(scores, 0);
  r.context = tape.MatMul(tape.Transpose(r.weights), memory);
  return r;
}

void Attention::Register(ParameterStore *store, const std::string &prefix,
                         Component component, size_t memory_dim, size_t query_dim,
                         const AttentionConfig &cfg, Rng *rng) {
  const size_t A = cfg.attention_dim;
  store->AddUniform(prefix + ".memory_proj", component, {memory_dim, A}, memory_dim, rng);
  store->AddUniform(prefix + ".query_proj", component, {query_dim, A}, query_dim, rng);
  store->AddUniform(prefix + ".bias", component, {1, A}, memory_dim, rng);
  store->AddUniform(prefix + ".score", component, {A, 1}, A, rng);
  if (cfg.type == AttentionType::kLocation) {
    store->AddUniform(prefix + ".loc_conv", component, {cfg.conv_width, cfg.conv_channels},
                      cfg.conv_width, rng);
    store->AddUniform(prefix + ".loc_proj", component, {cfg.conv_channels, A},
                      cfg.conv_channels, rng);
  }
}

Attention::Attention(const ParameterStore &store, const std::string &prefix,
                     const AttentionConfig &cfg)
    : cfg_(cfg),
      memory_proj_(store.Get(prefix + ".memory_proj")),
      query_proj_(store.Get(prefix + ".query_proj")),
      bias_(store.Get(prefix + ".bias")),
      score_(store.Get(prefix + ".score")) {
  if (cfg.type == AttentionType::kLocation) {
    loc_conv_ = store.Get(prefix + ".loc_conv");
    loc_proj_ = store.Get(prefix + ".loc_proj");
  }
}

Attention::Memory Attention::Prepare(ad::Tape &tape, const ad::Tensor &values) const {
  if (values.Cols() != MemoryDim())
    throw ShapeError("attention", StrCat("memory dim ", values.Cols(), " but expected ",
                                         MemoryDim()));
  return {values, tape.Add(tape.MatMul(values, memory_proj_), bias_)};
}

AttentionResult Attention::Step(ad::Tape &tape, const Memory &memory,
                                const ad::Tensor &query,
                                const ad::Tensor &prev_weights,
                                const char *where) const {
  const size_t K = memory.values.Rows();
  if (prev_weights.Size() != K)
    throw ShapeError(where, StrCat("previous weights length ", prev_weights.Size(),
                                   " does not match memory length ", K));
  ad::Tensor pre = tape.Add(memory.projected, tape.MatMul(query, query_proj_));
  if (cfg_.type == AttentionType::kLocation) {
    ad::Tensor loc = tape.Conv1d(prev_weights, loc_conv_, ad::Tensor(),
                                 cfg_.conv_width, 1);
    pre = tape.Add(pre, tape.MatMul(loc, loc_proj_));
  }
  ad::Tensor scores = tape.MatMul(tape.Tanh(pre), score_);
  return AttendWithScores(tape, scores, memory.values);
}

FusionResult HanFuse(ad::Tape &tape, const std::vector<ad::Tensor> &contexts,
                     const ad::Tensor &query, const ad::Tensor &prev_weights,
                     const Attention *stream_attention) {
  if (contexts.empty()) throw Error("han_fuse", "no stream contexts");
  const size_t d = contexts[0].Cols();
  for (const auto &c : contexts)
    if (c.Rows() != 1 || c.Cols() != d)
      throw ShapeError("han_fuse", "context " + ad::ShapeString(c.shape()) +
                                       " vs " + ad::ShapeString(contexts[0].shape()));
  if (contexts.size() == 1)
    return {contexts[0], ad::Tensor::FromValues({1, 1}, {1.0})};
  if (!stream_attention) throw Error("han_fuse", "no stream attention for N > 1");
  ad::Tensor stacked = tape.Concat(contexts, 0);
  auto mem = stream_attention->Prepare(tape, stacked);
  auto r = stream_attention->Step(tape, mem, query, prev_weights, "han_fuse");
  return {r.context, r.weights};
}

}  // namespace nn
}  // namespace memarray
