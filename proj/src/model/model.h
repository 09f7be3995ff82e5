// model/model.h

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

#ifndef MEMARRAY_MODEL_MODEL_H_
#define MEMARRAY_MODEL_MODEL_H_

#include <string>
#include <vector>

#include "autodiff/tape.h"
#include "base/config-map.h"
#include "base/matrix.h"
#include "data/feature-io.h"
#include "nn/attention.h"
#include "nn/decoder.h"
#include "nn/encoder.h"
#include "nn/layers.h"
#include "nn/parameter-store.h"

namespace memarray {
namespace model {

// kFeatures: every stream has its own encoder over raw frames.
// kUfe: streams are precomputed encoder outputs and no encoder is present.
enum class InputMode { kFeatures, kUfe };

const char *InputModeName(InputMode m);
InputMode ParseInputMode(const std::string &s);

struct ModelConfig {
  size_t num_streams = 1;
  InputMode input_mode = InputMode::kFeatures;
  size_t ufe_dim = 64;
  nn::EncoderConfig encoder;
  nn::AttentionConfig frame_attention;
  nn::AttentionConfig stream_attention;
  nn::DecoderConfig decoder;

  ModelConfig();

  size_t MemoryDim() const;
  size_t VocabSize() const { return decoder.vocab_size; }
  // Fixes derived fields (decoder context size) and checks consistency.
  void Finalize();
  void Validate() const;
  std::string ToString() const;
  static ModelConfig FromConfig(const ConfigMap &cfg);
  static ModelConfig FromString(const std::string &text, const std::string &origin);
};

// The Stage-2 configuration derived from a single-stream Stage-1 one.
ModelConfig Stage2Config(const ModelConfig &stage1, size_t num_streams);

// Parameter names.  Stream-specific modules carry the stream index.
std::string EncoderName(size_t stream);
std::string FrameAttName(size_t stream);
std::string CtcName(size_t stream);
inline const char *kHanName = "han";
inline const char *kDecoderName = "dec";

struct StreamBundle {
  std::string utterance_id;
  InputMode mode = InputMode::kFeatures;
  std::vector<Matrix> inputs;  // one per stream
  std::vector<int> labels;     // without eos; may be empty when decoding
};

struct MtlConfig {
  double lambda = 0.2;
  double label_smoothing = 0.05;
  std::vector<double> unigram;  // over U and eos; uniform when empty
};

// Label unigram distribution over U and eos (one eos per sequence).
std::vector<double> UnigramDistribution(const std::vector<std::vector<int>> &labels,
                                        size_t vocab_size);

// Sum over positions of the smoothed negative log likelihood, with targets
// q = (1 - w) onehot + w unigram.  `log_probs` has one row per target.
ad::Tensor AttentionXent(ad::Tape &tape, const std::vector<ad::Tensor> &log_probs,
                         const std::vector<int> &targets, double smoothing,
                         const std::vector<double> &unigram);

struct MtlResult {
  ad::Tensor loss;
  double ctc_loss = 0.0;  // mean over streams
  double att_loss = 0.0;
  // Filled when diagnostics are requested: beta[l] over streams, and
  // frame_weights[l][i] over the frames of stream i.
  std::vector<std::vector<double>> beta;
  std::vector<std::vector<std::vector<double>>> frame_weights;
};

class MemArrayModel {
 public:
  static void Register(nn::ParameterStore *store, const ModelConfig &cfg, Rng *rng);
  // A freshly initialized store with the configuration in its metadata.
  static nn::ParameterStore Create(const ModelConfig &cfg, uint64_t seed);
  static ModelConfig ConfigOf(const nn::ParameterStore &store);

  MemArrayModel(const nn::ParameterStore &store, const ModelConfig &cfg);
  explicit MemArrayModel(const nn::ParameterStore &store);

  const ModelConfig &config() const { return cfg_; }

  struct Encoded {
    std::vector<nn::Attention::Memory> memories;
    std::vector<ad::Tensor> ctc_log_posteriors;  // frames x (U + 1)
  };
  void CheckBundle(const StreamBundle &bundle) const;
  Encoded Encode(ad::Tape &tape, const StreamBundle &bundle) const;

  struct State {
    nn::LstmState decoder;
    std::vector<ad::Tensor> frame_weights;  // per stream, K x 1
    ad::Tensor beta;                        // N x 1
  };
  State InitialState(const Encoded &enc) const;

  struct StepResult {
    ad::Tensor log_probs;  // 1 x (U + 1)
    State state;
  };
  StepResult Step(ad::Tape &tape, const Encoded &enc, const State &state,
                  int prev_token) const;

  MtlResult ForwardMtl(ad::Tape &tape, const StreamBundle &bundle,
                       const MtlConfig &mtl, bool diagnostics = false) const;

 private:
  ModelConfig cfg_;
  std::vector<nn::Encoder> encoders_;
  std::vector<nn::Attention> frame_att_;
  std::vector<nn::Linear> ctc_;
  std::vector<nn::Attention> han_;  // empty for one stream
  nn::Decoder decoder_;
};

// Runs encoder `enc.<stream>` of a feature-mode model over one sequence.
// The output is tagged with the utterance and stream of the input.
data::FeatureSequence ExtractUfe(const nn::ParameterStore &store,
                                 const data::FeatureSequence &x, size_t encoder_index = 0);

}  // namespace model
}  // namespace memarray

#endif  // MEMARRAY_MODEL_MODEL_H_
