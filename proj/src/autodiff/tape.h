// autodiff/tape.h

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

#ifndef MEMARRAY_AUTODIFF_TAPE_H_
#define MEMARRAY_AUTODIFF_TAPE_H_

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "autodiff/tensor.h"

namespace memarray {
namespace ad {

// Define-by-run computation tape.  Every operation computes its value
// eagerly; when at least one input requires a gradient and the tape is
// recording, the operation is appended together with its adjoint rule.
// Backward() then visits the recorded operations once, in reverse order.
//
// A non-recording tape (Tape(false)) is used for inference: values are the
// same, nothing is retained.
class Tape {
 public:
  // Adjoint rule for Custom(): receives the output gradient and one gradient
  // buffer per input (nullptr for inputs that do not require a gradient).
  using CustomBackward = std::function<void(
      std::span<const double> out_grad, std::span<std::vector<double> *> in_grads)>;

  explicit Tape(bool record = true) : record_(record) {}
  Tape(const Tape &) = delete;
  Tape &operator=(const Tape &) = delete;

  bool Recording() const { return record_; }
  size_t NumOps() const { return ops_.size(); }

  // (m x k) * (k x n).
  Tensor MatMul(const Tensor &a, const Tensor &b);
  // Elementwise; `b` may also be a 1 x n row broadcast over the rows of `a`.
  Tensor Add(const Tensor &a, const Tensor &b);
  Tensor Sub(const Tensor &a, const Tensor &b);
  Tensor Mul(const Tensor &a, const Tensor &b);
  Tensor Scale(const Tensor &a, double s);

  Tensor Tanh(const Tensor &a);
  Tensor Sigmoid(const Tensor &a);
  Tensor Exp(const Tensor &a);
  Tensor Log(const Tensor &a);

  // axis 1 (or 0 for rank-1 input): normalize each row; axis 0 on a matrix:
  // normalize each column.  Both subtract the running maximum first.
  Tensor Softmax(const Tensor &a, int axis);
  Tensor LogSoftmax(const Tensor &a, int axis);

  Tensor Concat(std::span<const Tensor> parts, int axis);
  Tensor Slice(const Tensor &a, int axis, size_t begin, size_t end);
  Tensor Transpose(const Tensor &a);

  // x: T x C_in, time-major.  weight: (kernel * C_in) x C_out, rows ordered
  // tap-major.  Output has floor(T / stride) frames; frame j reads input
  // frames j*stride - (kernel-1)/2 + k, zero outside [0, T).  `bias` (1 x
  // C_out) may be undefined.
  Tensor Conv1d(const Tensor &x, const Tensor &weight, const Tensor &bias,
                size_t kernel, size_t stride);

  Tensor Sum(const Tensor &a);
  Tensor Mean(const Tensor &a);
  Tensor Max(const Tensor &a);

  // Rows `ids` of `table`, stacked; used for embedding lookup.
  Tensor GatherRows(const Tensor &table, std::span<const size_t> ids);

  // Records an externally computed operation (e.g. the CTC forward-backward).
  Tensor Custom(const std::string &name, std::vector<Tensor> inputs, Shape shape,
                std::vector<double> values, CustomBackward backward);

  // Populates gradients of every tensor reachable from `loss`.  Gradients of
  // all tensors touched by this tape are reset first, so two Backward() calls
  // do not accumulate.
  void Backward(const Tensor &loss);

 private:
  struct Op {
    const char *name;
    std::vector<std::shared_ptr<TensorData>> inputs;
    std::shared_ptr<TensorData> output;
    std::function<void()> backward;
  };

  bool AnyRequiresGrad(std::initializer_list<const Tensor *> ts) const;
  Tensor MakeOutput(Shape shape, std::vector<double> values, bool track) const;
  void Record(const char *name, std::vector<std::shared_ptr<TensorData>> inputs,
              const Tensor &out, std::function<void()> backward);
  Tensor Binary(const char *name, const Tensor &a, const Tensor &b, int kind);
  Tensor Unary(const char *name, const Tensor &a, int kind);
  Tensor SoftmaxImpl(const char *name, const Tensor &a, int axis, bool log);

  bool record_;
  std::vector<Op> ops_;
};

}  // namespace ad
}  // namespace memarray

#endif  // MEMARRAY_AUTODIFF_TAPE_H_
