// experiment/pipeline.h

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

#ifndef MEMARRAY_EXPERIMENT_PIPELINE_H_
#define MEMARRAY_EXPERIMENT_PIPELINE_H_

#include <string>
#include <vector>

#include "base/config-map.h"
#include "data/corpus-synth.h"
#include "decode/beam-search.h"
#include "decode/decode-io.h"
#include "metrics/report.h"
#include "model/model.h"
#include "train/trainer.h"

namespace memarray {
namespace experiment {

struct ExperimentConfig {
  data::CorpusSpec corpus;
  model::ModelConfig model;
  train::TrainConfig train;
  decode::BeamConfig beam;
  // Which parts of the comparison to run beyond Stage 1 and the two-stage
  // system.
  bool per_stream_models = true;
  bool stage2_scratch = true;
  bool joint_baseline = true;
  bool fusion_baselines = true;
  std::string work_dir;  // artifacts are written here when non-empty

  // Desk-scale defaults: two streams with alternating corruption.
  static ExperimentConfig Default(uint64_t seed);
  static ExperimentConfig FromConfig(const ConfigMap &cfg);
};

struct SystemResult {
  std::string name;
  size_t trainable_params = 0;
  size_t frozen_params = 0;
  double test_wer = 0.0;  // fraction
  std::vector<decode::DecodeRecord> test_records;
  uint64_t checksum = 0;
};

struct PipelineResult {
  // Stage-1 validation WER per stream: pooled model and stream-specific model.
  std::vector<double> pooled_valid_wer;
  std::vector<double> stream_valid_wer;
  std::vector<SystemResult> systems;  // declared order
  decode::SimplexStats simplex;       // test decode of the two-stage system
  std::vector<double> mean_beta;      // two-stage test decode
  size_t joint_params = 0;            // all parameters of the joint model
  uint64_t corpus_checksum = 0;
  uint64_t stage1_checksum = 0;
  uint64_t ufe_checksum = 0;
  double stage1_seconds = 0.0;        // stage 1 plus the per-stream models
  std::string report;                 // aligned comparison table

  const SystemResult *Find(const std::string &name) const;
};

// Names used in PipelineResult::systems.
inline const char *kTwoStage = "two-stage";
inline const char *kStage2Scratch = "stage2-scratch";
inline const char *kJoint = "joint-scratch";
inline const char *kSignalAverage = "signal-average";
inline const char *kFrameConcat = "frame-concat";
inline const char *kRover = "rover";

uint64_t CorpusChecksum(const data::Corpus &c);
uint64_t FeatureChecksum(const std::vector<data::Utterance> &utts);

// WER of decoding `bundles` with `store`.
double DecodeWer(const nn::ParameterStore &store, const std::vector<model::StreamBundle> &bundles,
                 const decode::BeamConfig &beam, std::vector<decode::DecodeRecord> *records = nullptr,
                 decode::SimplexStats *stats = nullptr);

PipelineResult RunPipeline(const ExperimentConfig &cfg);

}  // namespace experiment
}  // namespace memarray

#endif  // MEMARRAY_EXPERIMENT_PIPELINE_H_
