#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "base/error.h"
#include "base/random.h"
#include "doctest.h"
#include "fusion/fusion.h"

namespace memarray {
namespace fusion {

namespace {

data::FeatureSequence Seq(uint32_t id, size_t T, size_t D, double base) {
  data::FeatureSequence s;
  s.stream_id = id;
  s.utterance_id = "u";
  s.frames = Matrix(T, D);
  for (size_t t = 0; t < T; ++t)
    for (size_t d = 0; d < D; ++d) s.frames(t, d) = base + 10.0 * t + d;
  return s;
}

data::Utterance ThreeStreams() {
  data::Utterance u;
  u.id = "u";
  u.labels = {1, 2};
  u.streams = {Seq(0, 5, 2, 0.0), Seq(1, 4, 2, 100.0), Seq(2, 5, 2, -7.0)};
  return u;
}

std::vector<std::string> W(const std::string &s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s + " ") {
    if (c == ' ') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  return out;
}

}  // namespace

TEST_CASE("signal average is the elementwise mean over the shortest length") {
  auto u = ThreeStreams();
  auto avg = SignalAverage(u);
  REQUIRE(avg.streams.size() == 1);
  const Matrix &m = avg.streams[0].frames;
  CHECK(m.Rows() == 4);
  CHECK(m.Cols() == 2);
  for (size_t t = 0; t < 4; ++t)
    for (size_t d = 0; d < 2; ++d) {
      double mean = (u.streams[0].frames(t, d) + u.streams[1].frames(t, d) +
                     u.streams[2].frames(t, d)) / 3.0;
      CHECK(std::abs(m(t, d) - mean) < 1e-12);
    }
  CHECK(avg.labels == u.labels);
  u.streams[1] = Seq(1, 4, 3, 0.0);
  CHECK_THROWS_AS(SignalAverage(u), ShapeError);
  data::Utterance empty;
  CHECK_THROWS(SignalAverage(empty));
}

TEST_CASE("frame concatenation stacks streams in id order") {
  auto u = ThreeStreams();
  std::swap(u.streams[0], u.streams[2]);
  auto cat = FrameConcat(u);
  const Matrix &m = cat.streams[0].frames;
  CHECK(m.Rows() == 4);
  CHECK(m.Cols() == 6);
  auto ref = ThreeStreams();
  for (size_t t = 0; t < 4; ++t)
    for (size_t i = 0; i < 3; ++i)
      for (size_t d = 0; d < 2; ++d) CHECK(m(t, 2 * i + d) == ref.streams[i].frames(t, d));
  CHECK(FrameConcat(std::vector<data::Utterance>{u, u}).size() == 2);
}

TEST_CASE("rover majority and insertions") {
  CHECK(Rover({{W("a b c"), 0}, {W("a x c"), 0}, {W("a b c"), 0}}) == W("a b c"));
  CHECK(Rover({{W("a b"), 0}, {W("a c b"), 0}, {W("a b"), 0}}) == W("a b"));
  CHECK(Rover({{W("a b"), 0}, {W("a c b"), 0}, {W("a c b"), 0}}) == W("a c b"));
  CHECK(Rover({{W(""), 0}, {W(""), 0}}).empty());
  CHECK(Rover({{W("a"), 0}, {W(""), 0}, {W(""), 0}}).empty());
}

TEST_CASE("rover tie rules") {
  // Word tie: the better-scored hypothesis is merged first and wins.
  CHECK(Rover({{W("a b"), -1}, {W("a c"), -2}}) == W("a b"));
  CHECK(Rover({{W("a b"), -2}, {W("a c"), -1}}) == W("a c"));
  // Equal scores keep the input order.
  CHECK(Rover({{W("a c"), 0}, {W("a b"), 0}}) == W("a c"));
  // A null never wins a tie.
  CHECK(Rover({{W("a"), 0}, {W("a b"), 0}}) == W("a b"));
  CHECK(Rover({{W("a b"), 0}, {W("a"), 0}}) == W("a b"));
}

TEST_CASE("score weighted voting") {
  std::vector<RoverInput> in = {{W("a b"), 0.0}, {W("a c"), -1.0}, {W("a c"), -1.0}};
  CHECK(Rover(in) == W("a c"));
  RoverOptions o;
  o.score_weighted = true;
  CHECK(Rover(in, o) == W("a b"));  // 1 > 2 exp(-1)
  auto net = BuildNetwork(in, o);
  CHECK(net.weights[1] == doctest::Approx(std::exp(-1.0)));
}

TEST_CASE("rover needs two inputs") {
  CHECK_THROWS(Rover({{W("a"), 0}}));
  CHECK_THROWS(RoverRecords({{}}, {}));
}

TEST_CASE("network columns reproduce every input and the vote recounts") {
  Rng rng(4);
  const std::vector<std::string> vocab = {"a", "b", "c", "d"};
  for (int trial = 0; trial < 200; ++trial) {
    const size_t N = static_cast<size_t>(rng.UniformInt(2, 5));
    std::vector<RoverInput> in(N);
    for (auto &h : in) {
      const int len = static_cast<int>(rng.UniformInt(0, 6));
      for (int k = 0; k < len; ++k) h.words.push_back(vocab[rng.UniformInt(0, 3)]);
      h.score = static_cast<double>(rng.UniformInt(-2, 0));
    }
    auto net = BuildNetwork(in, {});
    for (size_t k = 0; k < N; ++k) {
      std::vector<std::string> col;
      for (const auto &slot : net.slots) {
        REQUIRE(slot.size() == N);
        if (!slot[k].empty()) col.push_back(slot[k]);
      }
      CHECK(col == in[net.order[k]].words);
    }
    for (const auto &slot : net.slots) {
      bool any = false;
      for (const auto &w : slot) any = any || !w.empty();
      CHECK(any);
    }
    // Independent recount.
    std::vector<std::string> expect;
    for (const auto &slot : net.slots) {
      std::map<std::string, int> count;
      for (const auto &w : slot) ++count[w];
      int best_word = 0;
      for (const auto &[w, c] : count)
        if (!w.empty()) best_word = std::max(best_word, c);
      if (best_word == 0 || count[""] > best_word) continue;
      for (const auto &w : slot)
        if (!w.empty() && count[w] == best_word) {
          expect.push_back(w);
          break;
        }
    }
    CHECK(Vote(net) == expect);
  }
}

TEST_CASE("rover over decode records") {
  using decode::DecodeRecord;
  std::vector<DecodeRecord> s0 = {{"u1", "a b", -1, 0, 0, 0, {}}, {"u2", "c", -1, 0, 0, 0, {}}};
  std::vector<DecodeRecord> s1 = {{"u2", "c d", -2, 0, 0, 0, {}}, {"u1", "a x", -2, 0, 0, 0, {}}};
  std::vector<DecodeRecord> s2 = {{"u1", "a x", -3, 0, 0, 0, {}}, {"u2", "c d", -3, 0, 0, 0, {}}};
  auto out = RoverRecords({s0, s1, s2}, {});
  REQUIRE(out.size() == 2);
  CHECK(out[0].utterance_id == "u1");
  CHECK(out[0].text == "a x");
  CHECK(out[1].text == "c d");
  s2.pop_back();
  CHECK_THROWS(RoverRecords({s0, s1, s2}, {}));
  s2.push_back(s2[0]);
  CHECK_THROWS(RoverRecords({s0, s1, s2}, {}));
}

}  // namespace fusion
}  // namespace memarray
