// autodiff/tape.cc

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

#include "autodiff/tape.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "base/error.h"

namespace memarray {
namespace ad {

namespace {

enum BinaryKind { kAdd = 0, kSub = 1, kMul = 2 };
enum UnaryKind { kTanh = 0, kSigmoid = 1, kExp = 2, kLog = 3 };

void CheckMatrixLike(const char *op, const Tensor &t) {
  if (!t.Defined()) throw ShapeError(op, "undefined tensor argument");
  if (t.Rank() > 2)
    throw ShapeError(op, "rank > 2 not supported: " + ShapeString(t.shape()));
}

[[noreturn]] void Mismatch(const char *op, const Tensor &a, const Tensor &b) {
  throw ShapeError(op, "shape mismatch " + ShapeString(a.shape()) + " vs " +
                           ShapeString(b.shape()));
}

double *GradPtr(TensorData *d) {
  if (!d->requires_grad) return nullptr;
  if (d->grad.size() != d->value.size()) d->grad.assign(d->value.size(), 0.0);
  return d->grad.data();
}

}  // namespace

bool Tape::AnyRequiresGrad(std::initializer_list<const Tensor *> ts) const {
  if (!record_) return false;
  for (const Tensor *t : ts)
    if (t->Defined() && t->RequiresGrad()) return true;
  return false;
}

Tensor Tape::MakeOutput(Shape shape, std::vector<double> values,
                        bool track) const {
  auto d = std::make_shared<TensorData>();
  d->shape = std::move(shape);
  d->value = std::move(values);
  d->requires_grad = track;
  return Tensor(std::move(d));
}

void Tape::Record(const char *name,
                  std::vector<std::shared_ptr<TensorData>> inputs,
                  const Tensor &out, std::function<void()> backward) {
  ops_.push_back(Op{name, std::move(inputs), out.Data(), std::move(backward)});
}

Tensor Tape::MatMul(const Tensor &a, const Tensor &b) {
  CheckMatrixLike("matmul", a);
  CheckMatrixLike("matmul", b);
  const size_t m = a.Rows(), k = a.Cols(), n = b.Cols();
  if (b.Rows() != k) Mismatch("matmul", a, b);
  std::vector<double> c(m * n, 0.0);
  const double *A = a.Values().data();
  const double *B = b.Values().data();
  for (size_t i = 0; i < m; ++i) {
    double *ci = c.data() + i * n;
    for (size_t p = 0; p < k; ++p) {
      const double aip = A[i * k + p];
      if (aip == 0.0) continue;
      const double *bp = B + p * n;
      for (size_t j = 0; j < n; ++j) ci[j] += aip * bp[j];
    }
  }
  bool track = AnyRequiresGrad({&a, &b});
  Tensor out = MakeOutput({m, n}, std::move(c), track);
  if (track) {
    TensorData *ad = a.Data().get(), *bd = b.Data().get(), *od = out.Data().get();
    Record("matmul", {a.Data(), b.Data()}, out, [ad, bd, od, m, k, n]() {
      const double *G = od->grad.data();
      const double *A = ad->value.data();
      const double *B = bd->value.data();
      if (double *gA = GradPtr(ad)) {
        for (size_t i = 0; i < m; ++i) {
          const double *gi = G + i * n;
          for (size_t p = 0; p < k; ++p) {
            const double *bp = B + p * n;
            double s = 0.0;
            for (size_t j = 0; j < n; ++j) s += gi[j] * bp[j];
            gA[i * k + p] += s;
          }
        }
      }
      if (double *gB = GradPtr(bd)) {
        for (size_t i = 0; i < m; ++i) {
          const double *gi = G + i * n;
          for (size_t p = 0; p < k; ++p) {
            const double aip = A[i * k + p];
            if (aip == 0.0) continue;
            double *gb = gB + p * n;
            for (size_t j = 0; j < n; ++j) gb[j] += aip * gi[j];
          }
        }
      }
    });
  }
  return out;
}

Tensor Tape::Binary(const char *name, const Tensor &a, const Tensor &b,
                    int kind) {
  CheckMatrixLike(name, a);
  CheckMatrixLike(name, b);
  // Broadcast modes: identical shapes, or one side is a single row matching
  // the other's column count.
  bool a_row = false, b_row = false;
  Shape out_shape;
  if (a.shape() == b.shape()) {
    out_shape = a.shape();
  } else if (a.Size() == b.Size() && a.Rows() == b.Rows() &&
             a.Cols() == b.Cols()) {
    out_shape = a.shape();
  } else if (b.Rows() == 1 && b.Cols() == a.Cols()) {
    b_row = true;
    out_shape = a.shape();
  } else if (a.Rows() == 1 && a.Cols() == b.Cols()) {
    a_row = true;
    out_shape = b.shape();
  } else {
    Mismatch(name, a, b);
  }
  const size_t rows = a_row ? b.Rows() : a.Rows();
  const size_t cols = a.Cols();
  std::vector<double> out(rows * cols);
  const double *A = a.Values().data();
  const double *B = b.Values().data();
  for (size_t i = 0; i < rows; ++i) {
    const double *ar = A + (a_row ? 0 : i * cols);
    const double *br = B + (b_row ? 0 : i * cols);
    double *o = out.data() + i * cols;
    switch (kind) {
      case kAdd: for (size_t j = 0; j < cols; ++j) o[j] = ar[j] + br[j]; break;
      case kSub: for (size_t j = 0; j < cols; ++j) o[j] = ar[j] - br[j]; break;
      default: for (size_t j = 0; j < cols; ++j) o[j] = ar[j] * br[j]; break;
    }
  }
  bool track = AnyRequiresGrad({&a, &b});
  Tensor result = MakeOutput(std::move(out_shape), std::move(out), track);
  if (track) {
    TensorData *ad = a.Data().get(), *bd = b.Data().get(),
               *od = result.Data().get();
    Record(name, {a.Data(), b.Data()}, result,
           [ad, bd, od, rows, cols, a_row, b_row, kind]() {
             const double *G = od->grad.data();
             double *gA = GradPtr(ad);
             double *gB = GradPtr(bd);
             const double *A = ad->value.data();
             const double *B = bd->value.data();
             for (size_t i = 0; i < rows; ++i) {
               const double *g = G + i * cols;
               size_t ao = a_row ? 0 : i * cols;
               size_t bo = b_row ? 0 : i * cols;
               for (size_t j = 0; j < cols; ++j) {
                 switch (kind) {
                   case kAdd:
                     if (gA) gA[ao + j] += g[j];
                     if (gB) gB[bo + j] += g[j];
                     break;
                   case kSub:
                     if (gA) gA[ao + j] += g[j];
                     if (gB) gB[bo + j] -= g[j];
                     break;
                   default:
                     if (gA) gA[ao + j] += g[j] * B[bo + j];
                     if (gB) gB[bo + j] += g[j] * A[ao + j];
                     break;
                 }
               }
             }
           });
  }
  return result;
}

Tensor Tape::Add(const Tensor &a, const Tensor &b) { return Binary("add", a, b, kAdd); }
Tensor Tape::Sub(const Tensor &a, const Tensor &b) { return Binary("sub", a, b, kSub); }
Tensor Tape::Mul(const Tensor &a, const Tensor &b) { return Binary("mul", a, b, kMul); }

Tensor Tape::Scale(const Tensor &a, double s) {
  std::vector<double> out(a.Values().begin(), a.Values().end());
  for (double &v : out) v *= s;
  bool track = AnyRequiresGrad({&a});
  Tensor result = MakeOutput(a.shape(), std::move(out), track);
  if (track) {
    TensorData *ad = a.Data().get(), *od = result.Data().get();
    Record("scale", {a.Data()}, result, [ad, od, s]() {
      double *gA = GradPtr(ad);
      for (size_t i = 0; i < od->grad.size(); ++i) gA[i] += s * od->grad[i];
    });
  }
  return result;
}

Tensor Tape::Unary(const char *name, const Tensor &a, int kind) {
  if (!a.Defined()) throw ShapeError(name, "undefined tensor argument");
  std::vector<double> out(a.Size());
  const double *A = a.Values().data();
  for (size_t i = 0; i < out.size(); ++i) {
    switch (kind) {
      case kTanh: out[i] = std::tanh(A[i]); break;
      case kSigmoid: out[i] = 1.0 / (1.0 + std::exp(-A[i])); break;
      case kExp: out[i] = std::exp(A[i]); break;
      default: out[i] = std::log(A[i]); break;
    }
  }
  bool track = AnyRequiresGrad({&a});
  Tensor result = MakeOutput(a.shape(), std::move(out), track);
  if (track) {
    TensorData *ad = a.Data().get(), *od = result.Data().get();
    Record(name, {a.Data()}, result, [ad, od, kind]() {
      double *gA = GradPtr(ad);
      const double *Y = od->value.data();
      const double *X = ad->value.data();
      const double *G = od->grad.data();
      for (size_t i = 0; i < od->value.size(); ++i) {
        switch (kind) {
          case kTanh: gA[i] += G[i] * (1.0 - Y[i] * Y[i]); break;
          case kSigmoid: gA[i] += G[i] * Y[i] * (1.0 - Y[i]); break;
          case kExp: gA[i] += G[i] * Y[i]; break;
          default: gA[i] += G[i] / X[i]; break;
        }
      }
    });
  }
  return result;
}

Tensor Tape::Tanh(const Tensor &a) { return Unary("tanh", a, kTanh); }
Tensor Tape::Sigmoid(const Tensor &a) { return Unary("sigmoid", a, kSigmoid); }
Tensor Tape::Exp(const Tensor &a) { return Unary("exp", a, kExp); }
Tensor Tape::Log(const Tensor &a) { return Unary("log", a, kLog); }

Tensor Tape::SoftmaxImpl(const char *name, const Tensor &a, int axis, bool log) {
  CheckMatrixLike(name, a);
  bool per_row;
  if (a.Rank() <= 1) {
    if (axis != 0) throw ShapeError(name, "axis out of range for rank-1 input");
    per_row = true;
  } else {
    if (axis != 0 && axis != 1) throw ShapeError(name, "axis must be 0 or 1");
    per_row = axis == 1;
  }
  const size_t rows = a.Rows(), cols = a.Cols();
  // Groups are rows (stride 1) or columns (stride cols).
  const size_t groups = per_row ? rows : cols;
  const size_t len = per_row ? cols : rows;
  const size_t stride = per_row ? 1 : cols;
  auto base = [=](size_t g) { return per_row ? g * cols : g; };
  std::vector<double> out(a.Size());
  const double *A = a.Values().data();
  for (size_t g = 0; g < groups; ++g) {
    const size_t b0 = base(g);
    double mx = -std::numeric_limits<double>::infinity();
    for (size_t t = 0; t < len; ++t) mx = std::max(mx, A[b0 + t * stride]);
    double sum = 0.0;
    for (size_t t = 0; t < len; ++t) sum += std::exp(A[b0 + t * stride] - mx);
    const double lse = mx + std::log(sum);
    for (size_t t = 0; t < len; ++t) {
      const double z = A[b0 + t * stride] - lse;
      out[b0 + t * stride] = log ? z : std::exp(z);
    }
  }
  bool track = AnyRequiresGrad({&a});
  Tensor result = MakeOutput(a.shape(), std::move(out), track);
  if (track) {
    TensorData *ad = a.Data().get(), *od = result.Data().get();
    Record(name, {a.Data()}, result,
           [ad, od, groups, len, stride, per_row, cols, log]() {
             double *gA = GradPtr(ad);
             const double *Y = od->value.data();
             const double *G = od->grad.data();
             for (size_t g = 0; g < groups; ++g) {
               const size_t b0 = per_row ? g * cols : g;
               if (log) {
                 double gs = 0.0;
                 for (size_t t = 0; t < len; ++t) gs += G[b0 + t * stride];
                 for (size_t t = 0; t < len; ++t) {
                   const size_t i = b0 + t * stride;
                   gA[i] += G[i] - std::exp(Y[i]) * gs;
                 }
               } else {
                 double dot = 0.0;
                 for (size_t t = 0; t < len; ++t) {
                   const size_t i = b0 + t * stride;
                   dot += G[i] * Y[i];
                 }
                 for (size_t t = 0; t < len; ++t) {
                   const size_t i = b0 + t * stride;
                   gA[i] += Y[i] * (G[i] - dot);
                 }
               }
             }
           });
  }
  return result;
}

Tensor Tape::Softmax(const Tensor &a, int axis) {
  return SoftmaxImpl("softmax", a, axis, false);
}

Tensor Tape::LogSoftmax(const Tensor &a, int axis) {
  return SoftmaxImpl("log_softmax", a, axis, true);
}

Tensor Tape::Concat(std::span<const Tensor> parts, int axis) {
  if (parts.empty()) throw ShapeError("concat", "no inputs");
  if (axis != 0 && axis != 1) throw ShapeError("concat", "axis must be 0 or 1");
  for (const Tensor &p : parts) CheckMatrixLike("concat", p);
  size_t rows = 0, cols = 0;
  if (axis == 0) {
    cols = parts[0].Cols();
    for (const Tensor &p : parts) {
      if (p.Cols() != cols) Mismatch("concat", parts[0], p);
      rows += p.Rows();
    }
  } else {
    rows = parts[0].Rows();
    for (const Tensor &p : parts) {
      if (p.Rows() != rows) Mismatch("concat", parts[0], p);
      cols += p.Cols();
    }
  }
  std::vector<double> out(rows * cols);
  // Offsets of each part in the output: row offset (axis 0) or column offset.
  std::vector<size_t> offs;
  size_t off = 0;
  for (const Tensor &p : parts) {
    offs.push_back(off);
    const double *P = p.Values().data();
    if (axis == 0) {
      std::copy(P, P + p.Size(), out.begin() + off * cols);
      off += p.Rows();
    } else {
      const size_t pc = p.Cols();
      for (size_t i = 0; i < rows; ++i)
        std::copy(P + i * pc, P + (i + 1) * pc, out.begin() + i * cols + off);
      off += pc;
    }
  }
  bool track = false;
  if (record_)
    for (const Tensor &p : parts) track = track || p.RequiresGrad();
  Tensor result = MakeOutput({rows, cols}, std::move(out), track);
  if (track) {
    std::vector<std::shared_ptr<TensorData>> ins;
    for (const Tensor &p : parts) ins.push_back(p.Data());
    std::vector<TensorData *> raw;
    for (auto &d : ins) raw.push_back(d.get());
    TensorData *od = result.Data().get();
    Record("concat", std::move(ins), result, [raw, offs, od, axis, rows, cols]() {
      const double *G = od->grad.data();
      for (size_t k = 0; k < raw.size(); ++k) {
        double *gP = GradPtr(raw[k]);
        if (!gP) continue;
        const size_t n = raw[k]->value.size();
        if (axis == 0) {
          const double *src = G + offs[k] * cols;
          for (size_t i = 0; i < n; ++i) gP[i] += src[i];
        } else {
          const size_t pc = n / rows;
          for (size_t i = 0; i < rows; ++i)
            for (size_t j = 0; j < pc; ++j)
              gP[i * pc + j] += G[i * cols + offs[k] + j];
        }
      }
    });
  }
  return result;
}

Tensor Tape::Slice(const Tensor &a, int axis, size_t begin, size_t end) {
  CheckMatrixLike("slice", a);
  if (axis != 0 && axis != 1) throw ShapeError("slice", "axis must be 0 or 1");
  const size_t rows = a.Rows(), cols = a.Cols();
  const size_t extent = axis == 0 ? rows : cols;
  if (begin > end || end > extent)
    throw ShapeError("slice", StrCat("range [", begin, ",", end, ") outside ",
                                     ShapeString(a.shape())));
  const size_t orows = axis == 0 ? end - begin : rows;
  const size_t ocols = axis == 0 ? cols : end - begin;
  std::vector<double> out(orows * ocols);
  const double *A = a.Values().data();
  for (size_t i = 0; i < orows; ++i)
    for (size_t j = 0; j < ocols; ++j)
      out[i * ocols + j] = axis == 0 ? A[(begin + i) * cols + j]
                                     : A[i * cols + begin + j];
  bool track = AnyRequiresGrad({&a});
  Tensor result = MakeOutput({orows, ocols}, std::move(out), track);
  if (track) {
    TensorData *ad = a.Data().get(), *od = result.Data().get();
    Record("slice", {a.Data()}, result,
           [ad, od, axis, begin, cols, orows, ocols]() {
             double *gA = GradPtr(ad);
             const double *G = od->grad.data();
             for (size_t i = 0; i < orows; ++i)
               for (size_t j = 0; j < ocols; ++j) {
                 size_t src = axis == 0 ? (begin + i) * cols + j
                                        : i * cols + begin + j;
                 gA[src] += G[i * ocols + j];
               }
           });
  }
  return result;
}

Tensor Tape::Transpose(const Tensor &a) {
  CheckMatrixLike("transpose", a);
  const size_t rows = a.Rows(), cols = a.Cols();
  std::vector<double> out(rows * cols);
  const double *A = a.Values().data();
  for (size_t i = 0; i < rows; ++i)
    for (size_t j = 0; j < cols; ++j) out[j * rows + i] = A[i * cols + j];
  bool track = AnyRequiresGrad({&a});
  Tensor result = MakeOutput({cols, rows}, std::move(out), track);
  if (track) {
    TensorData *ad = a.Data().get(), *od = result.Data().get();
    Record("transpose", {a.Data()}, result, [ad, od, rows, cols]() {
      double *gA = GradPtr(ad);
      const double *G = od->grad.data();
      for (size_t i = 0; i < rows; ++i)
        for (size_t j = 0; j < cols; ++j) gA[i * cols + j] += G[j * rows + i];
    });
  }
  return result;
}

Tensor Tape::Conv1d(const Tensor &x, const Tensor &weight, const Tensor &bias,
                    size_t kernel, size_t stride) {
  CheckMatrixLike("conv1d", x);
  CheckMatrixLike("conv1d", weight);
  if (kernel == 0 || stride == 0)
    throw ShapeError("conv1d", "kernel and stride must be positive");
  const size_t T = x.Rows(), cin = x.Cols(), cout = weight.Cols();
  if (weight.Rows() != kernel * cin) Mismatch("conv1d", x, weight);
  if (bias.Defined() && (bias.Rows() != 1 || bias.Cols() != cout))
    Mismatch("conv1d", weight, bias);
  const size_t tout = T / stride;
  const size_t pad = (kernel - 1) / 2;
  const size_t kc = kernel * cin;
  // im2col: tout x (kernel*cin).
  std::vector<double> col(tout * kc, 0.0);
  const double *X = x.Values().data();
  for (size_t j = 0; j < tout; ++j) {
    for (size_t k = 0; k < kernel; ++k) {
      const long src = static_cast<long>(j * stride + k) - static_cast<long>(pad);
      if (src < 0 || src >= static_cast<long>(T)) continue;
      std::copy(X + src * cin, X + (src + 1) * cin, col.begin() + j * kc + k * cin);
    }
  }
  std::vector<double> out(tout * cout, 0.0);
  const double *W = weight.Values().data();
  for (size_t j = 0; j < tout; ++j) {
    double *o = out.data() + j * cout;
    if (bias.Defined()) std::copy(bias.Values().begin(), bias.Values().end(), o);
    for (size_t p = 0; p < kc; ++p) {
      const double c = col[j * kc + p];
      if (c == 0.0) continue;
      const double *w = W + p * cout;
      for (size_t q = 0; q < cout; ++q) o[q] += c * w[q];
    }
  }
  bool track = AnyRequiresGrad({&x, &weight, &bias});
  Tensor result = MakeOutput({tout, cout}, std::move(out), track);
  if (track) {
    TensorData *xd = x.Data().get(), *wd = weight.Data().get(),
               *od = result.Data().get();
    TensorData *bd = bias.Defined() ? bias.Data().get() : nullptr;
    std::vector<std::shared_ptr<TensorData>> ins{x.Data(), weight.Data()};
    if (bd) ins.push_back(bias.Data());
    Record("conv1d", std::move(ins), result,
           [xd, wd, bd, od, col = std::move(col), T, cin, cout, tout, kc, kernel,
            stride, pad]() {
             const double *G = od->grad.data();
             if (double *gW = GradPtr(wd)) {
               for (size_t j = 0; j < tout; ++j)
                 for (size_t p = 0; p < kc; ++p) {
                   const double c = col[j * kc + p];
                   if (c == 0.0) continue;
                   double *gw = gW + p * cout;
                   for (size_t q = 0; q < cout; ++q) gw[q] += c * G[j * cout + q];
                 }
             }
             if (bd) {
               if (double *gB = GradPtr(bd))
                 for (size_t j = 0; j < tout; ++j)
                   for (size_t q = 0; q < cout; ++q) gB[q] += G[j * cout + q];
             }
             if (double *gX = GradPtr(xd)) {
               const double *W = wd->value.data();
               for (size_t j = 0; j < tout; ++j)
                 for (size_t k = 0; k < kernel; ++k) {
                   const long src =
                       static_cast<long>(j * stride + k) - static_cast<long>(pad);
                   if (src < 0 || src >= static_cast<long>(T)) continue;
                   for (size_t c = 0; c < cin; ++c) {
                     const double *w = W + (k * cin + c) * cout;
                     double s = 0.0;
                     for (size_t q = 0; q < cout; ++q) s += G[j * cout + q] * w[q];
                     gX[src * cin + c] += s;
                   }
                 }
             }
           });
  }
  return result;
}

Tensor Tape::Sum(const Tensor &a) {
  double s = 0.0;
  for (double v : a.Values()) s += v;
  bool track = AnyRequiresGrad({&a});
  Tensor result = MakeOutput({}, {s}, track);
  if (track) {
    TensorData *ad = a.Data().get(), *od = result.Data().get();
    Record("sum", {a.Data()}, result, [ad, od]() {
      double *gA = GradPtr(ad);
      for (size_t i = 0; i < ad->value.size(); ++i) gA[i] += od->grad[0];
    });
  }
  return result;
}

Tensor Tape::Mean(const Tensor &a) {
  if (a.Size() == 0) throw ShapeError("mean", "empty tensor");
  return Scale(Sum(a), 1.0 / static_cast<double>(a.Size()));
}

Tensor Tape::Max(const Tensor &a) {
  if (a.Size() == 0) throw ShapeError("max", "empty tensor");
  auto vals = a.Values();
  size_t arg = static_cast<size_t>(std::max_element(vals.begin(), vals.end()) -
                                   vals.begin());
  bool track = AnyRequiresGrad({&a});
  Tensor result = MakeOutput({}, {vals[arg]}, track);
  if (track) {
    TensorData *ad = a.Data().get(), *od = result.Data().get();
    Record("max", {a.Data()}, result, [ad, od, arg]() {
      GradPtr(ad)[arg] += od->grad[0];
    });
  }
  return result;
}

Tensor Tape::GatherRows(const Tensor &table, std::span<const size_t> ids) {
  CheckMatrixLike("gather_rows", table);
  const size_t cols = table.Cols();
  std::vector<double> out(ids.size() * cols);
  const double *Tb = table.Values().data();
  for (size_t i = 0; i < ids.size(); ++i) {
    if (ids[i] >= table.Rows())
      throw ShapeError("gather_rows",
                       StrCat("row ", ids[i], " outside ", ShapeString(table.shape())));
    std::copy(Tb + ids[i] * cols, Tb + (ids[i] + 1) * cols, out.begin() + i * cols);
  }
  bool track = AnyRequiresGrad({&table});
  Tensor result = MakeOutput({ids.size(), cols}, std::move(out), track);
  if (track) {
    TensorData *td = table.Data().get(), *od = result.Data().get();
    std::vector<size_t> idv(ids.begin(), ids.end());
    Record("gather_rows", {table.Data()}, result, [td, od, idv, cols]() {
      double *gT = GradPtr(td);
      for (size_t i = 0; i < idv.size(); ++i)
        for (size_t j = 0; j < cols; ++j)
          gT[idv[i] * cols + j] += od->grad[i * cols + j];
    });
  }
  return result;
}

Tensor Tape::Custom(const std::string &name, std::vector<Tensor> inputs,
                    Shape shape, std::vector<double> values,
                    CustomBackward backward) {
  if (values.size() != NumElements(shape))
    throw ShapeError(name, "custom op value count does not match shape " +
                               ShapeString(shape));
  bool track = false;
  if (record_)
    for (const Tensor &t : inputs) track = track || t.RequiresGrad();
  Tensor result = MakeOutput(std::move(shape), std::move(values), track);
  if (track) {
    std::vector<std::shared_ptr<TensorData>> ins;
    for (const Tensor &t : inputs) ins.push_back(t.Data());
    std::vector<TensorData *> raw;
    for (auto &d : ins) raw.push_back(d.get());
    TensorData *od = result.Data().get();
    Record("custom", std::move(ins), result,
           [raw, od, backward = std::move(backward)]() {
             std::vector<std::vector<double> *> grads;
             for (TensorData *d : raw) {
               GradPtr(d);
               grads.push_back(d->requires_grad ? &d->grad : nullptr);
             }
             backward(od->grad, grads);
           });
  }
  return result;
}

void Tape::Backward(const Tensor &loss) {
  if (!loss.Defined()) throw ShapeError("backward", "undefined loss");
  if (loss.Size() != 1)
    throw ShapeError("backward", "loss must be a scalar, got shape " +
                                     ShapeString(loss.shape()));
  for (Op &op : ops_) {
    for (auto &in : op.inputs)
      if (in->requires_grad) in->grad.assign(in->value.size(), 0.0);
    op.output->grad.assign(op.output->value.size(), 0.0);
  }
  if (!loss.RequiresGrad()) return;
  loss.Data()->grad.assign(1, 1.0);
  for (auto it = ops_.rbegin(); it != ops_.rend(); ++it) it->backward();
}

}  // namespace ad
}  // namespace memarray
