// nn/encoder.h

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

#ifndef MEMARRAY_NN_ENCODER_H_
#define MEMARRAY_NN_ENCODER_H_

#include <string>
#include <vector>

#include "autodiff/tape.h"
#include "base/config-map.h"
#include "nn/layers.h"
#include "nn/parameter-store.h"

namespace memarray {
namespace nn {

struct ConvLayerConfig {
  size_t channels = 32;
  size_t stride = 2;
  size_t kernel = 3;
};

// Convolutional front end followed by bidirectional LSTM layers, each with a
// tanh projection.  The conv strides multiply to the subsampling factor.
struct EncoderConfig {
  size_t input_dim = 8;
  std::vector<ConvLayerConfig> conv_layers{{32, 2, 3}, {32, 2, 3}};
  size_t recurrent_layers = 1;
  size_t hidden_units = 64;      // per direction
  size_t projection_units = 64;  // encoder output dimension
  size_t subsampling_factor = 4;

  size_t OutputDim() const { return projection_units; }
  size_t StrideProduct() const;
  void Validate() const;

  void ToConfig(const std::string &prefix, ConfigMap *cfg) const;
  static EncoderConfig FromConfig(const ConfigMap &cfg, const std::string &prefix);
};

class Encoder {
 public:
  static void Register(ParameterStore *store, const std::string &prefix,
                       const EncoderConfig &cfg, Rng *rng);
  Encoder(const ParameterStore &store, const std::string &prefix,
          const EncoderConfig &cfg);

  // x: T x input_dim.  Returns floor(T / s) x OutputDim().
  ad::Tensor Forward(ad::Tape &tape, const ad::Tensor &x) const;

 private:
  ad::Tensor RunDirection(ad::Tape &tape, const LstmCell &cell,
                          const ad::Tensor &x, bool reverse) const;

  EncoderConfig cfg_;
  std::vector<ad::Tensor> conv_weight_;
  std::vector<ad::Tensor> conv_bias_;
  std::vector<LstmCell> forward_;
  std::vector<LstmCell> backward_;
  std::vector<Linear> projection_;
};

}  // namespace nn
}  // namespace memarray

#endif  // MEMARRAY_NN_ENCODER_H_
