#include <cmath>

#include "autodiff/tape.h"
#include "base/error.h"
#include "doctest.h"
#include "test-util.h"

namespace memarray {
namespace {

using ad::Tape;
using ad::Tensor;
using testing::GradCheck;
using testing::RandomTensor;

TEST_CASE("softmax of equal scores is uniform") {
  Tape tape(false);
  Tensor y = tape.Softmax(Tensor::RowVector({0, 0, 0}), 1);
  for (double v : y.Values()) CHECK(v == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("log of exp is identity at 1.5") {
  Tape tape(false);
  Tensor y = tape.Log(tape.Exp(Tensor::Scalar(1.5)));
  CHECK(std::abs(y.Item() - 1.5) < 1e-15);
}

TEST_CASE("gradient of sum of squares at [1,2] is [2,4]") {
  Tensor x = Tensor::FromValues({2}, {1.0, 2.0}, true);
  Tape tape;
  Tensor loss = tape.Sum(tape.Mul(x, x));
  tape.Backward(loss);
  auto g = x.Grad();
  // Independent oracle: central differences with h = 1e-6.
  auto f = [&]() {
    auto v = x.Values();
    return v[0] * v[0] + v[1] * v[1];
  };
  CHECK(std::abs(g[0] - testing::NumericGrad(f, x, 0, 1e-6)) < 1e-6);
  CHECK(std::abs(g[1] - testing::NumericGrad(f, x, 1, 1e-6)) < 1e-6);
  CHECK(g[0] == doctest::Approx(2.0));
  CHECK(g[1] == doctest::Approx(4.0));
}

TEST_CASE("constant loss leaves parameter gradients at zero") {
  Tensor w = Tensor::FromValues({1, 3}, {0.5, -1.0, 2.0}, true);
  w.ZeroGrad();
  Tape tape;
  Tensor c = Tensor::Scalar(4.0);
  Tensor unused = tape.Tanh(w);
  (void)unused;
  tape.Backward(c);
  for (double g : w.Grad()) CHECK(g == 0.0);
}

TEST_CASE("gradient of w.x is x") {
  Tensor w = Tensor::FromValues({1, 3}, {0.1, 0.2, 0.3}, true);
  Tensor x = Tensor::FromValues({3, 1}, {1, 2, 3});
  Tape tape;
  tape.Backward(tape.MatMul(w, x));
  auto g = w.Grad();
  CHECK(g == std::vector<double>{1, 2, 3});
}

TEST_CASE("non-scalar loss is rejected") {
  Tensor w = Tensor::FromValues({1, 2}, {0.1, 0.2}, true);
  Tape tape;
  Tensor y = tape.Tanh(w);
  CHECK_THROWS_AS(tape.Backward(y), ShapeError);
}

TEST_CASE("shape mismatch names the operation and both shapes") {
  Tape tape;
  Tensor a = Tensor::Zeros({2, 3});
  Tensor b = Tensor::Zeros({4, 5});
  try {
    tape.MatMul(a, b);
    FAIL("expected ShapeError");
  } catch (const ShapeError &e) {
    std::string msg = e.what();
    CHECK(e.where() == "matmul");
    CHECK(msg.find("[2,3]") != std::string::npos);
    CHECK(msg.find("[4,5]") != std::string::npos);
  }
  CHECK_THROWS_AS(tape.Add(a, b), ShapeError);
  CHECK_THROWS_AS(tape.Slice(a, 1, 2, 5), ShapeError);
}

TEST_CASE("unreachable tensors get zero gradient") {
  Tensor a = Tensor::FromValues({1, 2}, {1, 2}, true);
  Tensor b = Tensor::FromValues({1, 2}, {3, 4}, true);
  Tape tape;
  Tensor side = tape.Exp(b);
  Tensor loss = tape.Sum(tape.Tanh(a));
  (void)side;
  tape.Backward(loss);
  for (double g : b.Grad()) CHECK(g == 0.0);
  for (double g : side.Grad()) CHECK(g == 0.0);
}

TEST_CASE("every primitive agrees with central differences") {
  Rng rng(7);
  const double tol = 1e-4;
  for (int trial = 0; trial < 5; ++trial) {
    Tensor a = RandomTensor({3, 4}, &rng);
    Tensor b = RandomTensor({4, 2}, &rng);
    Tensor c = RandomTensor({3, 4}, &rng);
    Tensor row = RandomTensor({1, 4}, &rng);
    Tensor pos = RandomTensor({3, 4}, &rng, 0.5, 2.0);
    Tensor probe = RandomTensor({3, 4}, &rng, -1, 1, false);
    Tensor probe2 = RandomTensor({3, 2}, &rng, -1, 1, false);
    // Weighted sums make every output element matter.
    auto weigh = [&](Tape &t, Tensor y) { return t.Sum(t.Mul(y, probe)); };
    SUBCASE("matmul") {
      auto r = GradCheck([&](Tape &t) { return t.Sum(t.Mul(t.MatMul(a, b), probe2)); },
                         {a, b}, &rng);
      CHECK(r.max_rel_error <= tol);
    }
    SUBCASE("add/sub/mul with row broadcast") {
      auto r = GradCheck(
          [&](Tape &t) {
            return weigh(t, t.Mul(t.Sub(t.Add(a, row), c), t.Add(row, c)));
          },
          {a, c, row}, &rng);
      CHECK(r.max_rel_error <= tol);
    }
    SUBCASE("tanh/sigmoid/exp/log/scale") {
      auto r = GradCheck(
          [&](Tape &t) {
            return weigh(t, t.Add(t.Mul(t.Tanh(a), t.Sigmoid(c)),
                                  t.Scale(t.Add(t.Exp(c), t.Log(pos)), 0.3)));
          },
          {a, c, pos}, &rng);
      CHECK(r.max_rel_error <= tol);
    }
    SUBCASE("softmax and log-softmax on both axes") {
      auto r = GradCheck(
          [&](Tape &t) {
            return t.Add(t.Add(weigh(t, t.Softmax(a, 0)), weigh(t, t.Softmax(a, 1))),
                         t.Add(weigh(t, t.LogSoftmax(a, 0)),
                               weigh(t, t.LogSoftmax(a, 1))));
          },
          {a}, &rng);
      CHECK(r.max_rel_error <= tol);
    }
    SUBCASE("concat/slice/transpose") {
      auto r = GradCheck(
          [&](Tape &t) {
            Tensor parts0[] = {a, c};
            Tensor v = t.Concat(parts0, 0);           // 6 x 4
            Tensor parts1[] = {a, t.Transpose(t.Transpose(c))};
            Tensor h = t.Concat(parts1, 1);           // 3 x 8
            Tensor s = t.Slice(h, 1, 2, 6);           // 3 x 4
            Tensor s0 = t.Slice(v, 0, 1, 4);          // 3 x 4
            return t.Add(weigh(t, s), weigh(t, t.Tanh(s0)));
          },
          {a, c}, &rng);
      CHECK(r.max_rel_error <= tol);
    }
    SUBCASE("conv1d") {
      Tensor x = RandomTensor({9, 3}, &rng);
      Tensor w = RandomTensor({3 * 3, 2}, &rng);
      Tensor bias = RandomTensor({1, 2}, &rng);
      Tensor px = RandomTensor({4, 2}, &rng, -1, 1, false);
      Tensor w7 = RandomTensor({7, 4}, &rng);
      Tensor x1 = RandomTensor({6, 1}, &rng);
      Tensor p7 = RandomTensor({6, 4}, &rng, -1, 1, false);
      auto r = GradCheck(
          [&](Tape &t) {
            Tensor y = t.Conv1d(x, w, bias, 3, 2);
            Tensor z = t.Conv1d(x1, w7, Tensor(), 7, 1);
            return t.Add(t.Sum(t.Mul(y, px)), t.Sum(t.Mul(z, p7)));
          },
          {x, w, bias, w7, x1}, &rng);
      CHECK(r.max_rel_error <= tol);
    }
    SUBCASE("reductions and gather") {
      std::vector<size_t> ids{2, 0, 2};
      auto r = GradCheck(
          [&](Tape &t) {
            return t.Add(t.Add(t.Mean(t.Mul(a, a)), t.Max(c)),
                         weigh(t, t.GatherRows(a, ids)));
          },
          {a, c}, &rng);
      CHECK(r.max_rel_error <= tol);
    }
  }
}

TEST_CASE("softmax rows sum to one and are nonnegative") {
  Rng rng(3);
  Tape tape(false);
  for (int i = 0; i < 50; ++i) {
    Tensor a = RandomTensor({4, 6}, &rng, -30, 30, false);
    Tensor y = tape.Softmax(a, 1);
    for (size_t r = 0; r < 4; ++r) {
      double s = 0;
      for (size_t c = 0; c < 6; ++c) {
        CHECK(y.At(r, c) >= 0.0);
        s += y.At(r, c);
      }
      CHECK(std::abs(s - 1.0) <= 1e-12);
    }
  }
}

TEST_CASE("conv1d output length is floor(T / stride)") {
  Tape tape(false);
  for (size_t T : {4u, 5u, 16u, 17u}) {
    Tensor x = Tensor::Zeros({T, 2});
    Tensor w = Tensor::Zeros({3 * 2, 5});
    CHECK(tape.Conv1d(x, w, Tensor(), 3, 2).Rows() == T / 2);
  }
}

TEST_CASE("forward evaluation is deterministic") {
  Rng r1(11), r2(11);
  Tensor a1 = RandomTensor({5, 5}, &r1), a2 = RandomTensor({5, 5}, &r2);
  Tape t1(false), t2(false);
  Tensor y1 = t1.Softmax(t1.MatMul(t1.Tanh(a1), a1), 1);
  Tensor y2 = t2.Softmax(t2.MatMul(t2.Tanh(a2), a2), 1);
  CHECK(std::equal(y1.Values().begin(), y1.Values().end(), y2.Values().begin()));
}

}  // namespace
}  // namespace memarray
