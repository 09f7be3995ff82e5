// data/corpus-synth.h

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

#ifndef MEMARRAY_DATA_CORPUS_SYNTH_H_
#define MEMARRAY_DATA_CORPUS_SYNTH_H_

#include <cstdint>
#include <string>
#include <vector>

#include "base/config-map.h"
#include "data/feature-io.h"
#include "data/manifest.h"

namespace memarray {
namespace data {

// How one stream's view of the prototype is degraded.  Noise is
// piecewise-constant in time: the utterance is cut into segments of roughly
// `segment_frames` frames and, segment by segment, exactly one stream is the
// corrupted one (round robin with a per-utterance random phase).
struct CorruptionProfile {
  double clean_noise_std = 0.05;
  double corrupt_noise_std = 1.5;
  double dropout_segment_rate = 0.0;  // probability a segment is zeroed
  double gain_drift = 0.0;            // amplitude of a slow multiplicative drift
  bool pure_noise = false;            // replace the stream by N(0, 1) frames
};

struct CorpusSpec {
  size_t vocab_size = 8;   // |U|, including the word boundary symbol
  size_t lexicon_size = 16;
  size_t min_word_length = 1;
  size_t max_word_length = 3;
  size_t train_utterances = 400;
  size_t valid_utterances = 60;
  size_t test_utterances = 60;
  size_t min_label_length = 4;
  size_t max_label_length = 10;
  size_t feature_dim = 8;
  size_t min_frames_per_label = 4;
  size_t max_frames_per_label = 8;
  size_t segment_frames = 20;
  double jitter_std = 0.1;
  size_t num_streams = 2;
  std::vector<CorruptionProfile> streams;  // one per stream
  size_t subsampling_factor = 4;           // used for the CTC feasibility guarantee
  uint64_t seed = 1;

  void Validate() const;
  static CorpusSpec FromConfig(const ConfigMap &cfg);
};

struct Utterance {
  std::string id;
  std::string transcript;
  std::vector<int> labels;
  uint64_t prototype_seed = 0;
  std::vector<FeatureSequence> streams;  // one per stream, same frame count
};

struct Corpus {
  std::vector<Utterance> train;
  std::vector<Utterance> valid;
  std::vector<Utterance> test;
  std::vector<std::string> lexicon;
};

// Pure function of the corpus spec, seed included.
Corpus GenerateCorpus(const CorpusSpec &spec);

// The clean prototype sequence of one utterance, before stream corruption;
// exposed so tests can check the zero-noise identity.
Matrix PrototypeFrames(const CorpusSpec &spec, const std::vector<int> &labels,
                       uint64_t utterance_seed);

// Writes feats/<utt>.s<stream>.fea, the manifest <name>.tsv and the
// reference transcripts <name>.ref ("id text" lines) under `dir`.
void WriteUtterances(const std::vector<Utterance> &utts, const std::string &dir,
                     const std::string &name);

// WriteUtterances for the train, valid and test splits, plus text.txt
// (training transcripts, one per line).
void WriteCorpus(const Corpus &corpus, const std::string &dir);

// Manifest records for a list of utterances; paths relative to the manifest.
std::vector<ManifestEntry> ManifestFor(const std::vector<Utterance> &utts);

// Loads utterances back from a manifest (grouping stream records by id, in
// first-appearance order).
std::vector<Utterance> LoadUtterances(const std::vector<ManifestEntry> &entries,
                                      size_t vocab_size);

}  // namespace data
}  // namespace memarray

#endif  // MEMARRAY_DATA_CORPUS_SYNTH_H_
