// train/trainer.h

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

#ifndef MEMARRAY_TRAIN_TRAINER_H_
#define MEMARRAY_TRAIN_TRAINER_H_

#include <functional>
#include <string>
#include <vector>

#include "base/config-map.h"
#include "data/corpus-synth.h"
#include "data/spec-augment.h"
#include "decode/rnn-lm.h"
#include "model/model.h"
#include "nn/parameter-store.h"
#include "train/adadelta.h"
#include "train/freeze-plan.h"

namespace memarray {
namespace train {

struct TrainConfig {
  size_t batch_size = 15;
  size_t max_epochs = 30;
  size_t patience = 3;
  uint64_t seed = 1;
  double lambda = 0.2;
  double label_smoothing = 0.05;
  AdaDeltaConfig optimizer;
  bool augment = false;
  data::AugmentPolicy augment_policy;
  // Greedy-or-beam decode of the validation set after every epoch; the WER
  // is logged only, stopping looks at the validation loss.
  bool valid_wer = true;
  size_t valid_beam = 1;

  void Validate() const;
  static TrainConfig FromConfig(const ConfigMap &cfg, const std::string &prefix);
};

struct EpochRecord {
  size_t epoch = 0;
  double train_loss = 0.0;
  double valid_loss = 0.0;
  double valid_wer = -1.0;  // -1 when not computed
  size_t trainable_params = 0;
  bool improved = false;

  std::string ToJson() const;
};

struct TrainResult {
  nn::ParameterStore best;
  std::vector<EpochRecord> epochs;
  size_t best_epoch = 0;
  double best_valid_loss = 0.0;
  bool early_stopped = false;
};

// The model-independent part of training: batching, shuffling, updates,
// validation, best-checkpoint and patience bookkeeping.  `store` is updated
// in place and ends at the last epoch; the best state is returned.
struct TrainHooks {
  size_t num_train = 0;
  // Loss of training example `index` (augmented with `aug_seed` if enabled).
  std::function<ad::Tensor(ad::Tape &, size_t index, uint64_t aug_seed)> train_loss;
  std::function<double()> valid_loss;
  std::function<double()> valid_wer;  // optional
};

TrainResult RunTraining(nn::ParameterStore *store, const TrainHooks &hooks,
                        const TrainConfig &cfg, const std::string &log_path = "");

// Trains a MemArrayModel held in `init` on bundles in the model's input mode.
TrainResult TrainModel(nn::ParameterStore init, const std::vector<model::StreamBundle> &train,
                       const std::vector<model::StreamBundle> &valid, const TrainConfig &cfg,
                       const std::string &log_path = "");

// Bundles built from a corpus split.
std::vector<model::StreamBundle> PooledBundles(const std::vector<data::Utterance> &utts);
std::vector<model::StreamBundle> SingleStreamBundles(const std::vector<data::Utterance> &utts,
                                                     size_t stream);
std::vector<model::StreamBundle> ParallelBundles(const std::vector<data::Utterance> &utts);

// Stage 1: one single-stream model over every stream of every utterance.
TrainResult TrainStage1(const model::ModelConfig &cfg,
                        const std::vector<data::Utterance> &train,
                        const std::vector<data::Utterance> &valid, const TrainConfig &tcfg,
                        const std::string &log_path = "");

// UFE features for every stream of every utterance.
std::vector<data::Utterance> ExtractUfeCorpus(const nn::ParameterStore &stage1,
                                              const std::vector<data::Utterance> &utts);

// Stage 2 on UFE utterances starting from a Stage-1 checkpoint.
TrainResult TrainStage2(const nn::ParameterStore &stage1,
                        const std::vector<data::Utterance> &ufe_train,
                        const std::vector<data::Utterance> &ufe_valid, const FreezePlan &plan,
                        const TrainConfig &tcfg, const std::string &log_path = "");

// Full multi-encoder model on raw parallel streams, from scratch.
TrainResult TrainJointBaseline(const model::ModelConfig &single_stream_cfg, size_t num_streams,
                               const std::vector<data::Utterance> &train,
                               const std::vector<data::Utterance> &valid,
                               const TrainConfig &tcfg, const std::string &log_path = "");

// Character LM on label sequences.
TrainResult TrainLm(const decode::LmConfig &cfg, const std::vector<std::vector<int>> &train,
                    const std::vector<std::vector<int>> &valid, const TrainConfig &tcfg,
                    const std::string &log_path = "");

}  // namespace train
}  // namespace memarray

#endif  // MEMARRAY_TRAIN_TRAINER_H_
