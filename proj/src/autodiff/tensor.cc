// autodiff/tensor.cc

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

#include "autodiff/tensor.h"

#include <algorithm>

#include "base/error.h"

namespace memarray {
namespace ad {

std::string ShapeString(const Shape &shape) {
  std::string s = "[";
  for (size_t i = 0; i < shape.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(shape[i]);
  }
  return s + "]";
}

size_t NumElements(const Shape &shape) {
  size_t n = 1;
  for (size_t e : shape) n *= e;
  return n;
}

Tensor Tensor::Zeros(Shape shape, bool requires_grad) {
  auto d = std::make_shared<TensorData>();
  d->value.assign(NumElements(shape), 0.0);
  d->shape = std::move(shape);
  d->requires_grad = requires_grad;
  return Tensor(std::move(d));
}

Tensor Tensor::FromValues(Shape shape, std::vector<double> values,
                          bool requires_grad) {
  if (values.size() != NumElements(shape))
    throw ShapeError("Tensor::FromValues",
                     StrCat("shape ", ShapeString(shape), " needs ",
                            NumElements(shape), " values, got ", values.size()));
  auto d = std::make_shared<TensorData>();
  d->shape = std::move(shape);
  d->value = std::move(values);
  d->requires_grad = requires_grad;
  return Tensor(std::move(d));
}

Tensor Tensor::Scalar(double v) { return FromValues({}, {v}); }

Tensor Tensor::FromMatrix(const Matrix &m, bool requires_grad) {
  return FromValues({m.Rows(), m.Cols()}, m.Data(), requires_grad);
}

Tensor Tensor::RowVector(std::vector<double> values) {
  size_t n = values.size();
  return FromValues({1, n}, std::move(values));
}

size_t Tensor::Rows() const {
  return Rank() == 2 ? data_->shape[0] : 1;
}

size_t Tensor::Cols() const {
  switch (Rank()) {
    case 0: return 1;
    case 1: return data_->shape[0];
    default: return data_->shape[Rank() - 1];
  }
}

double Tensor::Item() const {
  if (Size() != 1)
    throw ShapeError("Tensor::Item", "tensor of shape " + ShapeString(shape()) +
                                         " is not a scalar");
  return data_->value[0];
}

std::vector<double> Tensor::Grad() const {
  if (data_->grad.size() != data_->value.size())
    return std::vector<double>(data_->value.size(), 0.0);
  return data_->grad;
}

std::vector<double> &Tensor::MutableGrad() {
  if (data_->grad.size() != data_->value.size())
    data_->grad.assign(data_->value.size(), 0.0);
  return data_->grad;
}

void Tensor::ZeroGrad() { data_->grad.assign(data_->value.size(), 0.0); }

Matrix Tensor::ToMatrix() const { return Matrix(Rows(), Cols(), data_->value); }

Tensor Tensor::DeepCopy() const {
  auto d = std::make_shared<TensorData>(*data_);
  return Tensor(std::move(d));
}

}  // namespace ad
}  // namespace memarray
