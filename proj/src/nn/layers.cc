// nn/layers.cc

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

#include "nn/layers.h"

namespace memarray {
namespace nn {

void Linear::Register(ParameterStore *store, const std::string &prefix,
                      Component component, size_t in, size_t out, Rng *rng) {
  store->AddUniform(prefix + ".weight", component, {in, out}, in, rng);
  store->AddUniform(prefix + ".bias", component, {1, out}, in, rng);
}

Linear::Linear(const ParameterStore &store, const std::string &prefix)
    : weight_(store.Get(prefix + ".weight")), bias_(store.Get(prefix + ".bias")) {}

ad::Tensor Linear::Forward(ad::Tape &tape, const ad::Tensor &x) const {
  return tape.Add(tape.MatMul(x, weight_), bias_);
}

void LstmCell::Register(ParameterStore *store, const std::string &prefix,
                        Component component, size_t input_dim, size_t hidden,
                        Rng *rng) {
  store->AddUniform(prefix + ".input", component, {input_dim, 4 * hidden}, hidden, rng);
  store->AddUniform(prefix + ".recurrent", component, {hidden, 4 * hidden}, hidden, rng);
  store->AddUniform(prefix + ".bias", component, {1, 4 * hidden}, hidden, rng);
}

LstmCell::LstmCell(const ParameterStore &store, const std::string &prefix)
    : input_(store.Get(prefix + ".input")),
      recurrent_(store.Get(prefix + ".recurrent")),
      bias_(store.Get(prefix + ".bias")) {}

ad::Tensor LstmCell::ProjectInputs(ad::Tape &tape, const ad::Tensor &x) const {
  return tape.Add(tape.MatMul(x, input_), bias_);
}

LstmState LstmCell::Step(ad::Tape &tape, const ad::Tensor &input_gates,
                         const LstmState &prev) const {
  const size_t H = Hidden();
  ad::Tensor gates = tape.Add(input_gates, tape.MatMul(prev.h, recurrent_));
  ad::Tensor i = tape.Sigmoid(tape.Slice(gates, 1, 0, H));
  ad::Tensor f = tape.Sigmoid(tape.Slice(gates, 1, H, 2 * H));
  ad::Tensor g = tape.Tanh(tape.Slice(gates, 1, 2 * H, 3 * H));
  ad::Tensor o = tape.Sigmoid(tape.Slice(gates, 1, 3 * H, 4 * H));
  LstmState next;
  next.c = tape.Add(tape.Mul(f, prev.c), tape.Mul(i, g));
  next.h = tape.Mul(o, tape.Tanh(next.c));
  return next;
}

LstmState LstmCell::ZeroState() const {
  return {ad::Tensor::Zeros({1, Hidden()}), ad::Tensor::Zeros({1, Hidden()})};
}

}  // namespace nn
}  // namespace memarray
