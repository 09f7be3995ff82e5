// data/corpus-synth.cc

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

#include "data/corpus-synth.h"

#include <cmath>
#include <filesystem>
#include <map>
#include <numbers>

#include "base/binary-io.h"
#include "base/error.h"
#include "base/random.h"
#include "data/vocabulary.h"

namespace memarray {
namespace data {

namespace {

constexpr uint64_t kPrototypeSalt = 0x70726f746fULL;
constexpr uint64_t kLexiconSalt = 0x6c6578ULL;

std::vector<std::vector<double>> LabelVectors(const CorpusSpec &spec) {
  Rng rng(Rng::Mix(spec.seed, kPrototypeSalt));
  std::vector<std::vector<double>> v(spec.vocab_size,
                                     std::vector<double>(spec.feature_dim));
  for (auto &row : v)
    for (double &x : row) x = rng.Normal();
  return v;
}

std::vector<std::string> MakeLexicon(const CorpusSpec &spec) {
  Rng rng(Rng::Mix(spec.seed, kLexiconSalt));
  Vocabulary vocab(spec.vocab_size);
  std::vector<std::string> lex;
  size_t attempts = 0;
  while (lex.size() < spec.lexicon_size && attempts++ < 100000) {
    size_t len = static_cast<size_t>(rng.UniformInt(
        static_cast<int64_t>(spec.min_word_length), static_cast<int64_t>(spec.max_word_length)));
    std::vector<int> w;
    while (w.size() < len) {
      int c = static_cast<int>(rng.UniformInt(1, static_cast<int64_t>(spec.vocab_size) - 1));
      // No immediate repeats, so every label sequence has a short CTC path.
      if (!w.empty() && w.back() == c) continue;
      w.push_back(c);
    }
    std::string word = vocab.Decode(w);
    if (std::find(lex.begin(), lex.end(), word) == lex.end()) lex.push_back(word);
  }
  return lex;
}

std::string SampleTranscript(const CorpusSpec &spec,
                             const std::vector<std::string> &lexicon, Rng *rng) {
  const size_t target = static_cast<size_t>(
      rng->UniformInt(static_cast<int64_t>(spec.min_label_length),
                      static_cast<int64_t>(spec.max_label_length)));
  std::string best;
  for (int attempt = 0; attempt < 100; ++attempt) {
    std::string text;
    while (text.size() < target) {
      const std::string &w =
          lexicon[rng->UniformInt(0, static_cast<int64_t>(lexicon.size()) - 1)];
      text += (text.empty() ? "" : " ") + w;
    }
    if (text.size() <= spec.max_label_length) return text;
    if (best.empty() || text.size() < best.size()) best = text;
  }
  return best;
}

// Piecewise segment schedule shared by all streams of one utterance.
std::vector<size_t> SegmentIndex(size_t T, size_t segment_frames, Rng *rng) {
  std::vector<size_t> seg(T);
  const size_t lo = std::max<size_t>(1, segment_frames * 3 / 4);
  const size_t hi = std::max(lo, segment_frames * 5 / 4);
  size_t t = 0, k = 0;
  size_t first = static_cast<size_t>(rng->UniformInt(1, static_cast<int64_t>(hi)));
  size_t len = first;
  while (t < T) {
    for (size_t i = 0; i < len && t < T; ++i) seg[t++] = k;
    ++k;
    len = static_cast<size_t>(rng->UniformInt(static_cast<int64_t>(lo), static_cast<int64_t>(hi)));
  }
  return seg;
}

}  // namespace

void CorpusSpec::Validate() const {
  if (num_streams < 1) throw ConfigError("CorpusSpec", "need at least one stream");
  if (vocab_size < 2) throw ConfigError("CorpusSpec", "vocabulary needs at least 2 symbols");
  if (streams.size() != num_streams)
    throw ConfigError("CorpusSpec", StrCat("expected ", num_streams,
                                           " corruption profiles, got ", streams.size()));
  if (feature_dim == 0 || lexicon_size == 0 || min_word_length == 0 ||
      min_word_length > max_word_length)
    throw ConfigError("CorpusSpec", "bad lexicon or feature dimensions");
  if (min_label_length == 0 || min_label_length > max_label_length)
    throw ConfigError("CorpusSpec", "bad label length range");
  if (min_frames_per_label == 0 || min_frames_per_label > max_frames_per_label)
    throw ConfigError("CorpusSpec", "bad frames-per-label range");
  if (subsampling_factor == 0) throw ConfigError("CorpusSpec", "subsampling factor must be >= 1");
}

CorpusSpec CorpusSpec::FromConfig(const ConfigMap &cfg) {
  CorpusSpec s;
  auto gi = [&](const char *k, size_t d) {
    return static_cast<size_t>(cfg.GetInt(std::string("corpus.") + k, static_cast<int64_t>(d)));
  };
  s.vocab_size = gi("vocab_size", s.vocab_size);
  s.lexicon_size = gi("lexicon_size", s.lexicon_size);
  s.min_word_length = gi("min_word_length", s.min_word_length);
  s.max_word_length = gi("max_word_length", s.max_word_length);
  s.train_utterances = gi("train_utterances", s.train_utterances);
  s.valid_utterances = gi("valid_utterances", s.valid_utterances);
  s.test_utterances = gi("test_utterances", s.test_utterances);
  s.min_label_length = gi("min_label_length", s.min_label_length);
  s.max_label_length = gi("max_label_length", s.max_label_length);
  s.feature_dim = gi("feature_dim", s.feature_dim);
  s.min_frames_per_label = gi("min_frames_per_label", s.min_frames_per_label);
  s.max_frames_per_label = gi("max_frames_per_label", s.max_frames_per_label);
  s.segment_frames = gi("segment_frames", s.segment_frames);
  s.jitter_std = cfg.GetDouble("corpus.jitter_std", s.jitter_std);
  s.num_streams = gi("num_streams", s.num_streams);
  s.subsampling_factor = gi("subsampling_factor", s.subsampling_factor);
  s.seed = cfg.GetU64("corpus.seed", s.seed);
  for (size_t i = 0; i < s.num_streams; ++i) {
    std::string p = "corpus.stream" + std::to_string(i) + ".";
    CorruptionProfile c;
    c.clean_noise_std = cfg.GetDouble(p + "clean_noise_std", c.clean_noise_std);
    c.corrupt_noise_std = cfg.GetDouble(p + "corrupt_noise_std", c.corrupt_noise_std);
    c.dropout_segment_rate = cfg.GetDouble(p + "dropout_segment_rate", c.dropout_segment_rate);
    c.gain_drift = cfg.GetDouble(p + "gain_drift", c.gain_drift);
    c.pure_noise = cfg.GetBool(p + "pure_noise", c.pure_noise);
    s.streams.push_back(c);
  }
  s.Validate();
  return s;
}

Matrix PrototypeFrames(const CorpusSpec &spec, const std::vector<int> &labels,
                       uint64_t utterance_seed) {
  static thread_local std::map<std::pair<uint64_t, size_t>,
                               std::vector<std::vector<double>>> cache;
  auto key = std::make_pair(spec.seed, spec.vocab_size * 1000 + spec.feature_dim);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, LabelVectors(spec)).first;
  const auto &vecs = it->second;

  Rng rng(utterance_seed);
  const size_t D = spec.feature_dim;
  const size_t L = labels.size();
  const size_t lead = static_cast<size_t>(rng.UniformInt(1, 3));
  const size_t trail = static_cast<size_t>(rng.UniformInt(1, 3));
  std::vector<size_t> frames(L);
  size_t T = 0;
  // Resample durations until floor(T / s) leaves room for a CTC alignment.
  size_t repeats = 0;
  for (size_t i = 1; i < L; ++i) repeats += labels[i] == labels[i - 1];
  for (int attempt = 0;; ++attempt) {
    T = lead + trail;
    for (size_t &n : frames) {
      n = static_cast<size_t>(rng.UniformInt(static_cast<int64_t>(spec.min_frames_per_label),
                                             static_cast<int64_t>(spec.max_frames_per_label)));
      T += n;
    }
    if (T / spec.subsampling_factor >= L + repeats) break;
    if (attempt > 50) {
      frames.assign(L, spec.max_frames_per_label + spec.subsampling_factor);
      T = lead + trail + L * frames[0];
      break;
    }
  }
  Matrix x(T, D, 0.0);
  size_t t = lead;
  std::vector<double> silence(D, 0.0);
  for (size_t k = 0; k < L; ++k) {
    const auto &cur = vecs[labels[k]];
    const auto &next = k + 1 < L ? vecs[labels[k + 1]] : silence;
    for (size_t f = 0; f < frames[k]; ++f, ++t) {
      // Drift halfway toward the next label over the label's span.
      const double alpha = 0.5 * static_cast<double>(f) / static_cast<double>(frames[k]);
      for (size_t d = 0; d < D; ++d) x(t, d) = (1.0 - alpha) * cur[d] + alpha * next[d];
    }
  }
  for (double &v : x.Data()) v += spec.jitter_std * rng.Normal();
  return x;
}

Corpus GenerateCorpus(const CorpusSpec &spec) {
  spec.Validate();
  Corpus corpus;
  corpus.lexicon = MakeLexicon(spec);
  Vocabulary vocab(spec.vocab_size);
  struct Split {
    const char *name;
    size_t count;
    std::vector<Utterance> *out;
    uint64_t salt;
  };
  Split splits[] = {{"train", spec.train_utterances, &corpus.train, 1},
                    {"valid", spec.valid_utterances, &corpus.valid, 2},
                    {"test", spec.test_utterances, &corpus.test, 3}};
  for (const Split &sp : splits) {
    for (size_t i = 0; i < sp.count; ++i) {
      const uint64_t useed = Rng::Mix(spec.seed, sp.salt * 1000003ULL + i);
      Rng rng(useed);
      Utterance u;
      char id[64];
      std::snprintf(id, sizeof(id), "%s-%05zu", sp.name, i);
      u.id = id;
      u.transcript = SampleTranscript(spec, corpus.lexicon, &rng);
      u.labels = vocab.Encode(u.transcript);
      u.prototype_seed = Rng::Mix(useed, 17);
      Matrix proto = PrototypeFrames(spec, u.labels, u.prototype_seed);
      const size_t T = proto.Rows(), D = proto.Cols();
      std::vector<size_t> seg = SegmentIndex(T, spec.segment_frames, &rng);
      const size_t phase = static_cast<size_t>(
          rng.UniformInt(0, static_cast<int64_t>(spec.num_streams) - 1));
      for (size_t s = 0; s < spec.num_streams; ++s) {
        const CorruptionProfile &prof = spec.streams[s];
        Rng srng(Rng::Mix(useed, 100 + s));
        FeatureSequence fs;
        fs.kind = FeatureKind::kRaw;
        fs.utterance_id = u.id;
        fs.stream_id = static_cast<uint32_t>(s);
        fs.frames = proto;
        if (prof.pure_noise) {
          for (double &v : fs.frames.Data()) v = srng.Normal();
        } else {
          const size_t nseg = seg.back() + 1;
          std::vector<bool> dropped(nseg);
          for (size_t k = 0; k < nseg; ++k)
            dropped[k] = prof.dropout_segment_rate > 0 &&
                         srng.Uniform() < prof.dropout_segment_rate;
          const double drift_phase = srng.Uniform(0, 2 * std::numbers::pi);
          for (size_t t = 0; t < T; ++t) {
            const bool corrupted =
                spec.num_streams > 1 && (seg[t] + phase) % spec.num_streams == s;
            const double sd = corrupted ? prof.corrupt_noise_std : prof.clean_noise_std;
            const double gain =
                1.0 + prof.gain_drift * std::sin(drift_phase + 0.1 * static_cast<double>(t));
            for (size_t d = 0; d < D; ++d) {
              double v = dropped[seg[t]] ? 0.0 : gain * fs.frames(t, d);
              if (sd > 0) v += sd * srng.Normal();
              fs.frames(t, d) = v;
            }
          }
        }
        u.streams.push_back(std::move(fs));
      }
      sp.out->push_back(std::move(u));
    }
  }
  return corpus;
}

std::vector<ManifestEntry> ManifestFor(const std::vector<Utterance> &utts) {
  std::vector<ManifestEntry> out;
  for (const Utterance &u : utts)
    for (const FeatureSequence &s : u.streams)
      out.push_back({u.id, s.stream_id,
                     "feats/" + u.id + ".s" + std::to_string(s.stream_id) + ".fea",
                     s.frames.Rows(), u.transcript});
  return out;
}

void WriteUtterances(const std::vector<Utterance> &utts, const std::string &dir,
                     const std::string &name) {
  namespace fs = std::filesystem;
  fs::create_directories(fs::path(dir) / "feats");
  auto entries = ManifestFor(utts);
  size_t k = 0;
  std::string refs;
  for (const Utterance &u : utts) {
    for (const FeatureSequence &s : u.streams)
      WriteFeatures((fs::path(dir) / entries[k++].path).string(), s);
    refs += u.id + ' ' + u.transcript + '\n';
  }
  WriteManifest((fs::path(dir) / (name + ".tsv")).string(), entries);
  AtomicWriteFile((fs::path(dir) / (name + ".ref")).string(), refs);
}

void WriteCorpus(const Corpus &corpus, const std::string &dir) {
  WriteUtterances(corpus.train, dir, "train");
  WriteUtterances(corpus.valid, dir, "valid");
  WriteUtterances(corpus.test, dir, "test");
  std::string text;
  for (const Utterance &u : corpus.train) text += u.transcript + "\n";
  AtomicWriteFile((std::filesystem::path(dir) / "text.txt").string(), text);
}

std::vector<Utterance> LoadUtterances(const std::vector<ManifestEntry> &entries,
                                      size_t vocab_size) {
  Vocabulary vocab(vocab_size);
  std::vector<Utterance> out;
  std::map<std::string, size_t> index;
  for (const ManifestEntry &e : entries) {
    auto it = index.find(e.utterance_id);
    if (it == index.end()) {
      it = index.emplace(e.utterance_id, out.size()).first;
      Utterance u;
      u.id = e.utterance_id;
      u.transcript = e.transcript;
      u.labels = vocab.Encode(e.transcript);
      out.push_back(std::move(u));
    }
    Utterance &u = out[it->second];
    if (u.transcript != e.transcript)
      throw FormatError("manifest", "conflicting transcripts for " + e.utterance_id);
    FeatureSequence seq = ReadFeatures(e.path);
    if (seq.frames.Rows() != e.frame_count)
      throw FormatError("manifest", e.path + ": frame count does not match manifest");
    seq.stream_id = e.stream_id;
    u.streams.push_back(std::move(seq));
  }
  for (Utterance &u : out)
    std::sort(u.streams.begin(), u.streams.end(),
              [](const FeatureSequence &a, const FeatureSequence &b) {
                return a.stream_id < b.stream_id;
              });
  return out;
}

}  // namespace data
}  // namespace memarray
