#include <array>
#include <cstring>
#include <filesystem>
#include <set>

#include "base/checksum.h"
#include "base/error.h"
#include "base/random.h"
#include "data/corpus-synth.h"
#include "data/feature-io.h"
#include "data/manifest.h"
#include "data/spec-augment.h"
#include "data/vocabulary.h"
#include "doctest.h"

namespace memarray {
namespace data {

namespace {

FeatureSequence RandomSequence(size_t T, size_t D, uint64_t seed) {
  Rng rng(seed);
  FeatureSequence s;
  s.kind = FeatureKind::kUfe;
  s.utterance_id = "utt-7";
  s.stream_id = 3;
  s.frames = Matrix(T, D);
  for (double &v : s.frames.Data()) v = rng.Normal() * 1e3;
  return s;
}

CorpusSpec SmallSpec() {
  CorpusSpec spec;
  spec.train_utterances = 6;
  spec.valid_utterances = 2;
  spec.test_utterances = 2;
  spec.num_streams = 2;
  spec.streams.assign(2, CorruptionProfile());
  spec.seed = 11;
  return spec;
}

std::string CorpusDigest(const Corpus &c) {
  Fnv1a64 h;
  for (const auto *split : {&c.train, &c.valid, &c.test})
    for (const Utterance &u : *split)
      for (const FeatureSequence &s : u.streams) h.Update(EncodeFeatures(s));
  return HexDigest(h.Digest());
}

}  // namespace

TEST_CASE("feature codec round trip is bitwise") {
  FeatureSequence s = RandomSequence(7, 5, 3);
  s.frames(0, 0) = -0.0;
  s.frames(1, 1) = 5e-324;
  std::string bytes = EncodeFeatures(s);
  FeatureSequence back = DecodeFeatures(bytes, "mem");
  CHECK(back.kind == s.kind);
  CHECK(back.utterance_id == s.utterance_id);
  CHECK(back.stream_id == s.stream_id);
  CHECK(EncodeFeatures(back) == bytes);
  CHECK(std::memcmp(back.frames.Data().data(), s.frames.Data().data(),
                    s.frames.Data().size() * sizeof(double)) == 0);

  auto dir = std::filesystem::temp_directory_path() / "memarray-data-test";
  std::filesystem::create_directories(dir);
  std::string path = (dir / "x.fea").string();
  WriteFeatures(path, s);
  CHECK(EncodeFeatures(ReadFeatures(path)) == bytes);
}

TEST_CASE("feature codec rejects bad input") {
  std::string bytes = EncodeFeatures(RandomSequence(3, 2, 1));
  std::string bad = bytes;
  bad[0] = 'X';
  CHECK_THROWS_AS(DecodeFeatures(bad, "mem"), FormatError);
  bad = bytes;
  bad[4] = 9;
  CHECK_THROWS_AS(DecodeFeatures(bad, "mem"), FormatError);
  CHECK_THROWS_AS(DecodeFeatures(bytes.substr(0, bytes.size() - 1), "mem"), FormatError);
  CHECK_THROWS_AS(DecodeFeatures(bytes + "z", "mem"), FormatError);
  FeatureSequence empty;
  empty.frames = Matrix(0, 4);
  CHECK_THROWS(DecodeFeatures(EncodeFeatures(empty), "mem"));
}

TEST_CASE("vocabulary encodes words with boundary id 0") {
  Vocabulary v(8);
  CHECK(v.Encode("ab  ce") == std::vector<int>{1, 2, 0, 3, 5});
  CHECK(v.Decode({1, 2, 0, 3, 5}) == "ab ce");
  CHECK_THROWS(v.Encode("z"));
  CHECK_THROWS(Vocabulary(1));
}

TEST_CASE("zero corruption leaves every stream equal to the prototype") {
  CorpusSpec spec = SmallSpec();
  for (auto &p : spec.streams) p.clean_noise_std = p.corrupt_noise_std = 0.0;
  Corpus c = GenerateCorpus(spec);
  REQUIRE(c.train.size() == 6);
  for (const Utterance &u : c.train) {
    REQUIRE(u.streams.size() == 2);
    CHECK(u.streams[0].frames == u.streams[1].frames);
  }
  for (const Utterance &u : c.test)
    CHECK(u.streams[0].frames == PrototypeFrames(spec, u.labels, u.prototype_seed));
}

TEST_CASE("corpus generation is a pure function of the corpus spec") {
  CorpusSpec spec = SmallSpec();
  std::string a = CorpusDigest(GenerateCorpus(spec));
  CHECK(a == CorpusDigest(GenerateCorpus(spec)));
  spec.seed = 12;
  CHECK(a != CorpusDigest(GenerateCorpus(spec)));
}

TEST_CASE("corpus invariants") {
  CorpusSpec spec = SmallSpec();
  spec.train_utterances = 40;
  Corpus c = GenerateCorpus(spec);
  std::set<std::string> ids;
  for (const auto *split : {&c.train, &c.valid, &c.test})
    for (const Utterance &u : *split) {
      CHECK(ids.insert(u.id).second);
      CHECK(u.streams.size() == spec.num_streams);
      CHECK(u.labels.size() >= spec.min_label_length);
      CHECK(u.labels.size() <= spec.max_label_length);
      size_t repeats = 0;
      for (size_t i = 1; i < u.labels.size(); ++i) repeats += u.labels[i] == u.labels[i - 1];
      CHECK(u.streams[0].frames.Rows() / spec.subsampling_factor >= u.labels.size() + repeats);
      for (const auto &s : u.streams) CHECK(s.frames.Rows() == u.streams[0].frames.Rows());
    }
  CorpusSpec bad = spec;
  bad.num_streams = 0;
  bad.streams.clear();
  CHECK_THROWS_AS(GenerateCorpus(bad), ConfigError);
  bad = spec;
  bad.vocab_size = 1;
  CHECK_THROWS_AS(GenerateCorpus(bad), ConfigError);
}

TEST_CASE("corruption alternates between streams") {
  CorpusSpec spec = SmallSpec();
  spec.train_utterances = 20;
  for (auto &p : spec.streams) p.clean_noise_std = 0.0;
  Corpus c = GenerateCorpus(spec);
  // With zero clean noise, at every frame exactly one stream differs from the
  // other, and both streams are corrupted somewhere in most utterances.
  size_t both = 0;
  for (const Utterance &u : c.train) {
    Matrix proto = PrototypeFrames(spec, u.labels, u.prototype_seed);
    std::array<size_t, 2> corrupted{0, 0};
    for (size_t t = 0; t < proto.Rows(); ++t) {
      auto p = proto.Row(t);
      size_t dirty = 0;
      for (size_t s = 0; s < 2; ++s) {
        auto a = u.streams[s].frames.Row(t);
        bool clean = std::equal(a.begin(), a.end(), p.begin());
        dirty += !clean;
        corrupted[s] += !clean;
      }
      CHECK(dirty == 1);
    }
    both += corrupted[0] > 0 && corrupted[1] > 0;
  }
  CHECK(both > c.train.size() / 2);
}

TEST_CASE("manifest round trip and verification") {
  CorpusSpec spec = SmallSpec();
  Corpus c = GenerateCorpus(spec);
  auto dir = std::filesystem::temp_directory_path() / "memarray-corpus-test";
  std::filesystem::remove_all(dir);
  WriteCorpus(c, dir.string());
  auto entries = ReadManifest((dir / "train.tsv").string());
  CHECK(entries.size() == c.train.size() * spec.num_streams);
  VerifyManifest(entries);
  auto utts = LoadUtterances(entries, spec.vocab_size);
  REQUIRE(utts.size() == c.train.size());
  for (size_t i = 0; i < utts.size(); ++i) {
    CHECK(utts[i].id == c.train[i].id);
    CHECK(utts[i].labels == c.train[i].labels);
    for (size_t s = 0; s < spec.num_streams; ++s)
      CHECK(utts[i].streams[s].frames == c.train[i].streams[s].frames);
  }
  entries[0].frame_count += 1;
  CHECK_THROWS(VerifyManifest(entries));
}

TEST_CASE("zero mask policy is the identity") {
  AugmentPolicy p;
  p.time_mask_count = p.feature_mask_count = 0;
  CHECK(p.IsNoop());
  Matrix x = RandomSequence(12, 4, 2).frames;
  CHECK(SpecAugment(x, p, 5) == x);
}

TEST_CASE("one time mask of width 3 zeroes 3 D values") {
  const size_t T = 10, D = 4;
  Matrix x(T, D, 1.0);
  Matrix y = ApplyMasks(x, {Mask{true, 4, 3}});
  CHECK(y.Rows() == T);
  CHECK(y.Cols() == D);
  size_t zeros = 0;
  for (double v : y.Data()) zeros += v == 0.0;
  CHECK(zeros == 3 * D);
  for (size_t t = 0; t < T; ++t)
    for (size_t d = 0; d < D; ++d)
      CHECK(y(t, d) == ((t >= 4 && t < 7) ? 0.0 : 1.0));
  CHECK_THROWS(ApplyMasks(x, {Mask{true, 8, 3}}));
}

TEST_CASE("masked fraction stays within policy bounds over 1000 draws") {
  AugmentPolicy p;
  p.max_time_mask_width = 6;
  p.time_mask_count = 3;
  p.max_feature_mask_width = 3;
  p.feature_mask_count = 2;
  const size_t T = 20, D = 8;
  Matrix x(T, D, 1.0);
  // Largest possible union when nothing overlaps.
  const double cells = static_cast<double>(T * D);
  const double tmax = 3.0 * 6 * D, fmax = 2.0 * 3 * T;
  const double bound = std::min(0.5, (tmax + fmax) / cells);
  double total = 0.0;
  for (uint64_t seed = 0; seed < 1000; ++seed) {
    Matrix y = SpecAugment(x, p, seed);
    size_t zeros = 0;
    for (double v : y.Data()) zeros += v == 0.0;
    double frac = zeros / cells;
    CHECK(frac <= bound + 1e-12);
    total += frac;
  }
  CHECK(total > 0.0);

  AugmentPolicy wide;
  wide.max_time_mask_width = 30;
  Rng rng(1);
  CHECK_THROWS(SampleMasks(wide, T, D, &rng));
}

}  // namespace data
}  // namespace memarray
