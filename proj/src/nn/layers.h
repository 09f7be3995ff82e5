// nn/layers.h

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

#ifndef MEMARRAY_NN_LAYERS_H_
#define MEMARRAY_NN_LAYERS_H_

#include <string>

#include "autodiff/tape.h"
#include "nn/parameter-store.h"

namespace memarray {
namespace nn {

// y = x W + b, with W: in x out and b: 1 x out.
class Linear {
 public:
  static void Register(ParameterStore *store, const std::string &prefix,
                       Component component, size_t in, size_t out, Rng *rng);
  Linear() = default;
  Linear(const ParameterStore &store, const std::string &prefix);

  ad::Tensor Forward(ad::Tape &tape, const ad::Tensor &x) const;
  size_t InputDim() const { return weight_.Rows(); }
  size_t OutputDim() const { return weight_.Cols(); }

 private:
  ad::Tensor weight_;
  ad::Tensor bias_;
};

struct LstmState {
  ad::Tensor h;  // 1 x hidden
  ad::Tensor c;  // 1 x hidden
};

// Standard LSTM cell, gate order (input, forget, cell, output).
class LstmCell {
 public:
  static void Register(ParameterStore *store, const std::string &prefix,
                       Component component, size_t input_dim, size_t hidden,
                       Rng *rng);
  LstmCell() = default;
  LstmCell(const ParameterStore &store, const std::string &prefix);

  size_t Hidden() const { return recurrent_.Rows(); }
  size_t InputDim() const { return input_.Rows(); }

  // x W + b for every row of x; rows feed Step() as precomputed gates.
  ad::Tensor ProjectInputs(ad::Tape &tape, const ad::Tensor &x) const;
  LstmState Step(ad::Tape &tape, const ad::Tensor &input_gates,
                 const LstmState &prev) const;
  LstmState ZeroState() const;

 private:
  ad::Tensor input_;      // input_dim x 4H
  ad::Tensor recurrent_;  // H x 4H
  ad::Tensor bias_;       // 1 x 4H
};

}  // namespace nn
}  // namespace memarray

#endif  // MEMARRAY_NN_LAYERS_H_
