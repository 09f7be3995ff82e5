// nn/encoder.cc

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

#include "nn/encoder.h"

#include "base/error.h"

namespace memarray {
namespace nn {

size_t EncoderConfig::StrideProduct() const {
  size_t s = 1;
  for (const auto &c : conv_layers) s *= c.stride;
  return s;
}

void EncoderConfig::Validate() const {
  if (subsampling_factor < 1)
    throw ConfigError("EncoderConfig", "subsampling factor must be >= 1");
  if (StrideProduct() != subsampling_factor)
    throw ConfigError("EncoderConfig",
                      StrCat("conv strides multiply to ", StrideProduct(),
                             " but subsampling factor is ", subsampling_factor));
  if (input_dim == 0 || hidden_units == 0 || projection_units == 0 ||
      recurrent_layers == 0)
    throw ConfigError("EncoderConfig", "dimensions must be positive");
  for (const auto &c : conv_layers)
    if (c.channels == 0 || c.kernel == 0 || c.stride == 0)
      throw ConfigError("EncoderConfig", "conv layer dimensions must be positive");
}

void EncoderConfig::ToConfig(const std::string &prefix, ConfigMap *cfg) const {
  cfg->Set(prefix + "input_dim", std::to_string(input_dim));
  std::string ch, st, ke;
  for (size_t i = 0; i < conv_layers.size(); ++i) {
    const char *sep = i ? "," : "";
    ch += sep + std::to_string(conv_layers[i].channels);
    st += sep + std::to_string(conv_layers[i].stride);
    ke += sep + std::to_string(conv_layers[i].kernel);
  }
  cfg->Set(prefix + "conv_channels", ch);
  cfg->Set(prefix + "conv_strides", st);
  cfg->Set(prefix + "conv_kernels", ke);
  cfg->Set(prefix + "recurrent_layers", std::to_string(recurrent_layers));
  cfg->Set(prefix + "hidden_units", std::to_string(hidden_units));
  cfg->Set(prefix + "projection_units", std::to_string(projection_units));
  cfg->Set(prefix + "subsampling_factor", std::to_string(subsampling_factor));
}

EncoderConfig EncoderConfig::FromConfig(const ConfigMap &cfg,
                                        const std::string &prefix) {
  EncoderConfig e;
  e.input_dim = static_cast<size_t>(cfg.GetInt(prefix + "input_dim", 8));
  auto ch = cfg.GetDoubleList(prefix + "conv_channels", {32, 32});
  auto st = cfg.GetDoubleList(prefix + "conv_strides", {2, 2});
  auto ke = cfg.GetDoubleList(prefix + "conv_kernels", std::vector<double>(ch.size(), 3));
  if (ch.size() != st.size() || ch.size() != ke.size())
    throw ConfigError("EncoderConfig", "conv channel/stride/kernel lists differ in length");
  e.conv_layers.clear();
  for (size_t i = 0; i < ch.size(); ++i)
    e.conv_layers.push_back({static_cast<size_t>(ch[i]), static_cast<size_t>(st[i]),
                             static_cast<size_t>(ke[i])});
  e.recurrent_layers = static_cast<size_t>(cfg.GetInt(prefix + "recurrent_layers", 1));
  e.hidden_units = static_cast<size_t>(cfg.GetInt(prefix + "hidden_units", 64));
  e.projection_units = static_cast<size_t>(cfg.GetInt(prefix + "projection_units", 64));
  e.subsampling_factor =
      static_cast<size_t>(cfg.GetInt(prefix + "subsampling_factor", 4));
  e.Validate();
  return e;
}

void Encoder::Register(ParameterStore *store, const std::string &prefix,
                       const EncoderConfig &cfg, Rng *rng) {
  cfg.Validate();
  size_t in = cfg.input_dim;
  for (size_t i = 0; i < cfg.conv_layers.size(); ++i) {
    const auto &c = cfg.conv_layers[i];
    std::string p = prefix + ".conv" + std::to_string(i);
    store->AddUniform(p + ".weight", Component::kEncoder, {c.kernel * in, c.channels},
                      c.kernel * in, rng);
    store->AddUniform(p + ".bias", Component::kEncoder, {1, c.channels},
                      c.kernel * in, rng);
    in = c.channels;
  }
  for (size_t l = 0; l < cfg.recurrent_layers; ++l) {
    std::string p = prefix + ".blstm" + std::to_string(l);
    LstmCell::Register(store, p + ".fwd", Component::kEncoder, in, cfg.hidden_units, rng);
    LstmCell::Register(store, p + ".bwd", Component::kEncoder, in, cfg.hidden_units, rng);
    Linear::Register(store, p + ".proj", Component::kEncoder, 2 * cfg.hidden_units,
                     cfg.projection_units, rng);
    in = cfg.projection_units;
  }
}

Encoder::Encoder(const ParameterStore &store, const std::string &prefix,
                 const EncoderConfig &cfg)
    : cfg_(cfg) {
  for (size_t i = 0; i < cfg.conv_layers.size(); ++i) {
    std::string p = prefix + ".conv" + std::to_string(i);
    conv_weight_.push_back(store.Get(p + ".weight"));
    conv_bias_.push_back(store.Get(p + ".bias"));
  }
  for (size_t l = 0; l < cfg.recurrent_layers; ++l) {
    std::string p = prefix + ".blstm" + std::to_string(l);
    forward_.emplace_back(store, p + ".fwd");
    backward_.emplace_back(store, p + ".bwd");
    projection_.emplace_back(store, p + ".proj");
  }
}

ad::Tensor Encoder::RunDirection(ad::Tape &tape, const LstmCell &cell,
                                 const ad::Tensor &x, bool reverse) const {
  const size_t T = x.Rows();
  ad::Tensor gates = cell.ProjectInputs(tape, x);
  std::vector<ad::Tensor> out(T);
  LstmState st = cell.ZeroState();
  for (size_t k = 0; k < T; ++k) {
    const size_t t = reverse ? T - 1 - k : k;
    st = cell.Step(tape, tape.Slice(gates, 0, t, t + 1), st);
    out[t] = st.h;
  }
  return tape.Concat(out, 0);
}

ad::Tensor Encoder::Forward(ad::Tape &tape, const ad::Tensor &x) const {
  if (x.Cols() != cfg_.input_dim)
    throw ShapeError("encode", StrCat("input dim ", x.Cols(), " but encoder expects ",
                                      cfg_.input_dim));
  if (x.Rows() < cfg_.subsampling_factor)
    throw Error("encode", "sequence shorter than subsampling factor");
  ad::Tensor h = x;
  for (size_t i = 0; i < conv_weight_.size(); ++i) {
    const auto &c = cfg_.conv_layers[i];
    h = tape.Tanh(tape.Conv1d(h, conv_weight_[i], conv_bias_[i], c.kernel, c.stride));
  }
  for (size_t l = 0; l < forward_.size(); ++l) {
    ad::Tensor parts[] = {RunDirection(tape, forward_[l], h, false),
                          RunDirection(tape, backward_[l], h, true)};
    h = tape.Tanh(projection_[l].Forward(tape, tape.Concat(parts, 1)));
  }
  return h;
}

}  // namespace nn
}  // namespace memarray
