// autodiff/tensor.h

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

#ifndef MEMARRAY_AUTODIFF_TENSOR_H_
#define MEMARRAY_AUTODIFF_TENSOR_H_

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "base/matrix.h"

namespace memarray {
namespace ad {

using Shape = std::vector<size_t>;

std::string ShapeString(const Shape &shape);
size_t NumElements(const Shape &shape);

struct TensorData {
  Shape shape;
  std::vector<double> value;
  // Empty until a backward pass (or ZeroGrad) touches the tensor; otherwise
  // the same length as `value`.
  std::vector<double> grad;
  bool requires_grad = false;
};

// Shared handle to a dense row-major array of doubles.  Copies alias the same
// storage; use DeepCopy() for an independent value.
//
// Rank 0 and rank 1 tensors are viewed as 1 x n matrices by the 2-D
// operations on the tape.
class Tensor {
 public:
  Tensor() = default;

  static Tensor Zeros(Shape shape, bool requires_grad = false);
  static Tensor FromValues(Shape shape, std::vector<double> values,
                           bool requires_grad = false);
  static Tensor Scalar(double v);
  static Tensor FromMatrix(const Matrix &m, bool requires_grad = false);
  static Tensor RowVector(std::vector<double> values);

  bool Defined() const { return data_ != nullptr; }
  const Shape &shape() const { return data_->shape; }
  size_t Rank() const { return data_->shape.size(); }
  size_t Size() const { return data_->value.size(); }
  // 2-D view extents.
  size_t Rows() const;
  size_t Cols() const;

  std::span<const double> Values() const { return data_->value; }
  std::span<double> MutableValues() { return data_->value; }
  double Item() const;
  double At(size_t r, size_t c) const { return data_->value[r * Cols() + c]; }

  bool RequiresGrad() const { return data_->requires_grad; }
  void SetRequiresGrad(bool on) { data_->requires_grad = on; }
  // Gradient buffer; an all-zero vector of the right size if never written.
  std::vector<double> Grad() const;
  std::vector<double> &MutableGrad();
  void ZeroGrad();

  Matrix ToMatrix() const;
  Tensor DeepCopy() const;

  const std::shared_ptr<TensorData> &Data() const { return data_; }
  explicit Tensor(std::shared_ptr<TensorData> data) : data_(std::move(data)) {}

 private:
  std::shared_ptr<TensorData> data_;
};

}  // namespace ad
}  // namespace memarray

#endif  // MEMARRAY_AUTODIFF_TENSOR_H_
