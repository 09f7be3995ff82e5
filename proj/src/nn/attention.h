// nn/attention.h

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

#ifndef MEMARRAY_NN_ATTENTION_H_
#define MEMARRAY_NN_ATTENTION_H_

#include <string>
#include <vector>

#include "autodiff/tape.h"
#include "base/config-map.h"
#include "nn/parameter-store.h"

namespace memarray {
namespace nn {

enum class AttentionType { kContent, kLocation };

const char *AttentionTypeName(AttentionType t);
AttentionType ParseAttentionType(const std::string &s);

struct AttentionConfig {
  AttentionType type = AttentionType::kLocation;
  size_t attention_dim = 64;
  // Location features: previous weights convolved with `conv_channels`
  // filters of width `conv_width`.
  size_t conv_channels = 4;
  size_t conv_width = 7;

  void ToConfig(const std::string &prefix, ConfigMap *cfg) const;
  static AttentionConfig FromConfig(const ConfigMap &cfg, const std::string &prefix,
                                    const AttentionConfig &defaults);
};

struct AttentionResult {
  ad::Tensor context;  // 1 x memory_dim
  ad::Tensor weights;  // K x 1, a simplex over memory rows
};

// softmax(scores) over the K memory rows, and the weighted sum of `memory`.
AttentionResult AttendWithScores(ad::Tape &tape, const ad::Tensor &scores,
                                 const ad::Tensor &memory);

// Additive attention over the rows of a memory matrix:
//   e_k = w . tanh(m_k W + q V + f_k U + b),  a = softmax(e)
// where f_k are location features of the previous weights (location type
// only).  The same module serves the frame level (memory = encoder frames)
// and the stream level (memory = stacked per-stream contexts).
class Attention {
 public:
  static void Register(ParameterStore *store, const std::string &prefix,
                       Component component, size_t memory_dim, size_t query_dim,
                       const AttentionConfig &cfg, Rng *rng);
  Attention(const ParameterStore &store, const std::string &prefix,
            const AttentionConfig &cfg);

  struct Memory {
    ad::Tensor values;     // K x memory_dim
    ad::Tensor projected;  // K x attention_dim
  };
  Memory Prepare(ad::Tape &tape, const ad::Tensor &values) const;

  // `prev_weights` is K x 1 (all zeros before the first output step).
  AttentionResult Step(ad::Tape &tape, const Memory &memory,
                       const ad::Tensor &query, const ad::Tensor &prev_weights,
                       const char *where = "attention") const;

  size_t MemoryDim() const { return memory_proj_.Rows(); }
  const AttentionConfig &config() const { return cfg_; }

 private:
  AttentionConfig cfg_;
  ad::Tensor memory_proj_;
  ad::Tensor query_proj_;
  ad::Tensor bias_;
  ad::Tensor score_;
  ad::Tensor loc_conv_;
  ad::Tensor loc_proj_;
};

// Stream-level fusion.  With one stream the weight is exactly 1 and no
// parameters are used.
struct FusionResult {
  ad::Tensor fused;    // 1 x d
  ad::Tensor weights;  // N x 1
};

FusionResult HanFuse(ad::Tape &tape, const std::vector<ad::Tensor> &contexts,
                     const ad::Tensor &query, const ad::Tensor &prev_weights,
                     const Attention *stream_attention);

}  // namespace nn
}  // namespace memarray

#endif  // MEMARRAY_NN_ATTENTION_H_
