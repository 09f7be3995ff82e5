#include <algorithm>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "base/error.h"
#include "base/random.h"
#include "decode/decode-io.h"
#include "doctest.h"
#include "metrics/report.h"
#include "metrics/score.h"

namespace memarray {
namespace metrics {

namespace {

std::vector<std::string> W(const std::string &s) { return Tokenize(s, Unit::kWord); }

ErrorCounts Counts(size_t s, size_t i, size_t d, size_t n) { return {s, i, d, n}; }

// Full-matrix DP minimizing (edits, insertions + deletions); S, I and D
// follow from the two totals and the lengths.
ErrorCounts OracleAlign(const std::vector<std::string> &r, const std::vector<std::string> &h) {
  using Cell = std::pair<size_t, size_t>;
  const size_t R = r.size(), H = h.size();
  std::vector<std::vector<Cell>> c(R + 1, std::vector<Cell>(H + 1));
  for (size_t i = 0; i <= R; ++i)
    for (size_t j = 0; j <= H; ++j) {
      if (i == 0 && j == 0) continue;
      Cell best{SIZE_MAX, SIZE_MAX};
      if (i > 0) best = std::min(best, Cell{c[i - 1][j].first + 1, c[i - 1][j].second + 1});
      if (j > 0) best = std::min(best, Cell{c[i][j - 1].first + 1, c[i][j - 1].second + 1});
      if (i > 0 && j > 0) {
        const size_t sub = r[i - 1] == h[j - 1] ? 0 : 1;
        best = std::min(best, Cell{c[i - 1][j - 1].first + sub, c[i - 1][j - 1].second});
      }
      c[i][j] = best;
    }
  const auto [cost, indel] = c[R][H];
  const long diff = static_cast<long>(H) - static_cast<long>(R);
  ErrorCounts e;
  e.substitutions = cost - indel;
  e.insertions = static_cast<size_t>((static_cast<long>(indel) + diff) / 2);
  e.deletions = static_cast<size_t>((static_cast<long>(indel) - diff) / 2);
  e.reference_length = R;
  return e;
}

std::string TempDir() {
  auto dir = std::filesystem::temp_directory_path() / "memarray-metrics-test";
  std::filesystem::create_directories(dir);
  return dir.string();
}

void WriteText(const std::string &path, const std::string &body) {
  std::ofstream(path) << body;
}

}  // namespace

TEST_CASE("word error counts by hand") {
  CHECK(Align(W("a b c"), W("a b c")) == Counts(0, 0, 0, 3));
  CHECK(Align(W("a b c"), W("a x c")) == Counts(1, 0, 0, 3));
  CHECK(Align(W("a b c"), W("a c")) == Counts(0, 0, 1, 3));
  CHECK(Align(W("a b c"), W("a b y c")) == Counts(0, 1, 0, 3));
  CHECK(Align(W("a b"), W("")) == Counts(0, 0, 2, 2));
  CHECK(Align(W(""), W("a b")) == Counts(0, 2, 0, 0));
  // Substitution preferred over a deletion plus an insertion.
  CHECK(Align(W("a b"), W("b a")) == Counts(2, 0, 0, 2));
  CHECK(Align(W("a b c d"), W("b c d e")) == Counts(0, 1, 1, 4));
  CHECK(Align(W("a b c"), W("x y z")).Rate() == doctest::Approx(1.0));
  CHECK(Align(W("a"), W("x y z")).Rate() == doctest::Approx(3.0));
  CHECK(Align(W(""), W("a b")).Rate() == 2.0);
  CHECK(Align(W(""), W("")).Rate() == 0.0);
}

TEST_CASE("alignment agrees with an independent dp on random pairs") {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::string> r, h;
    for (int k = rng.UniformInt(0, 9); k > 0; --k) r.push_back(std::string(1, 'a' + rng.UniformInt(0, 3)));
    for (int k = rng.UniformInt(0, 9); k > 0; --k) h.push_back(std::string(1, 'a' + rng.UniformInt(0, 3)));
    ErrorCounts got = Align(r, h), want = OracleAlign(r, h);
    CHECK(got == want);
    ErrorCounts sw = Align(h, r);
    CHECK(sw.substitutions == got.substitutions);
    CHECK(sw.insertions == got.deletions);
    CHECK(sw.deletions == got.insertions);
  }
}

TEST_CASE("tokenization and character units") {
  CHECK(W("  A  b\tc ") == std::vector<std::string>{"a", "b", "c"});
  CHECK(Tokenize("ab c", Unit::kChar) == std::vector<std::string>{"a", "b", " ", "c"});
  auto rep = Score({{"u", "ab c"}}, {{"u", "ab d"}}, Unit::kChar);
  CHECK(rep.total == Counts(1, 0, 0, 4));
  CHECK(rep.Rate() == doctest::Approx(0.25));
  // Joining two words costs one deleted space.
  auto joined = Score({{"u", "ab c"}}, {{"u", "abc"}}, Unit::kChar);
  CHECK(joined.total == Counts(0, 0, 1, 4));
}

TEST_CASE("corpus scoring") {
  TextMap refs = {{"u1", "a b c"}, {"u2", "d e"}, {"u3", "f"}};
  TextMap hyps = {{"u2", "d x"}, {"u1", "a b c q"}};
  auto rep = Score(refs, hyps, Unit::kWord);
  REQUIRE(rep.utterances.size() == 3);
  CHECK(rep.utterances[0].utterance_id == "u1");
  CHECK(rep.utterances[2].missing);
  CHECK(rep.utterances[2].counts == Counts(0, 0, 1, 1));
  CHECK(rep.total == Counts(1, 1, 1, 6));
  CHECK(rep.Rate() == doctest::Approx(0.5));
  CHECK(rep.ToText().find("u3") != std::string::npos);
  CHECK_THROWS(Score({{"u1", "a"}, {"u1", "b"}}, {}, Unit::kWord));
  CHECK_THROWS(Score(refs, {{"u1", "a"}, {"u1", "a"}}, Unit::kWord));
  CHECK_THROWS(Score(refs, {{"zz", "a"}}, Unit::kWord));
}

TEST_CASE("text files") {
  const std::string path = TempDir() + "/ref.txt";
  WriteText(path, "u1 a b  c\n\nu2\tdd\nu3\n");
  auto m = ReadTextFile(path);
  REQUIRE(m.size() == 3);
  CHECK(m[0] == std::make_pair(std::string("u1"), std::string("a b  c")));
  CHECK(m[1].second == "dd");
  CHECK(m[2].second.empty());
  CHECK_THROWS(ReadTextFile(TempDir() + "/does-not-exist"));
}

TEST_CASE("fusion comparison from a json description") {
  const std::string dir = TempDir();
  WriteText(dir + "/ref.txt", "u1 a b\nu2 c d\n");
  decode::WriteDecodeFile(dir + "/s1.dec", {{"u1", "a b", 0, 0, 0, 0, {}},
                                            {"u2", "c x", 0, 0, 0, 0, {}}});
  decode::WriteDecodeFile(dir + "/s2.dec", {{"u1", "a b", 0, 0, 0, 0, {}},
                                            {"u2", "c d", 0, 0, 0, 0, {}}});
  WriteText(dir + "/cmp.json", R"({
    "references": "ref.txt",
    "columns": ["test"],
    "systems": [
      {"name": "one", "trainable_params": 10, "frozen_params": 5, "decodes": {"test": "s1.dec"}},
      {"name": "two", "trainable_params": 3, "frozen_params": 0, "decodes": {"test": "s2.dec"}}
    ]})");
  auto t = CompareFusionFromJson(dir + "/cmp.json");
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[0].name == "one");
  CHECK(t.rows[0].wer[0] == doctest::Approx(25.0));
  CHECK(t.rows[1].wer[0] == doctest::Approx(0.0));
  CHECK(t.rows[0].frozen_params == 5);
  CHECK(t.ToTsv().rfind("system\ttrainable_params\tfrozen_params\twer_test\n", 0) == 0);
  CHECK(t.ToText().find("two") != std::string::npos);

  WriteText(dir + "/bad.json", R"({
    "references": "ref.txt",
    "columns": ["test", "dev"],
    "systems": [
      {"name": "one", "trainable_params": 1, "frozen_params": 0, "decodes": {"test": "gone.dec"}}
    ]})");
  try {
    CompareFusionFromJson(dir + "/bad.json");
    FAIL("expected an error");
  } catch (const Error &e) {
    const std::string msg = e.what();
    CHECK(msg.find("gone.dec") != std::string::npos);
    CHECK(msg.find("one/dev") != std::string::npos);
  }
}

TEST_CASE("stream weight trace") {
  std::vector<decode::DecodeRecord> recs(2);
  recs[0].utterance_id = "u1";
  recs[0].beta = {{0.25, 0.75}, {0.5, 0.5}};
  recs[1].utterance_id = "u2";
  recs[1].beta = {{1.0, 0.0}};
  const std::string trace = BetaTrace(recs);
  CHECK(trace == "u1\t0\t0.25\t0.75\nu1\t1\t0.5\t0.5\nu2\t0\t1\t0\n");
  auto mean = MeanBeta(recs);
  REQUIRE(mean.size() == 2);
  CHECK(mean[0] == doctest::Approx((0.25 + 0.5 + 1.0) / 3));
  recs[1].beta = {{0.7, 0.7}};
  CHECK_THROWS(BetaTrace(recs));
  recs[1].beta = {{1.5, -0.5}};
  CHECK_THROWS(BetaTrace(recs));
  recs[1].beta.clear();
  CHECK_THROWS(BetaTrace(recs));
}

}  // namespace metrics
}  // namespace memarray
