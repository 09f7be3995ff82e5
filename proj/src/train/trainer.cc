// train/trainer.cc

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

#include "train/trainer.h"

#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>

#include "base/error.h"
#include "base/random.h"
#include "decode/corpus-decode.h"
#include "json.hpp"
#include "metrics/score.h"

namespace memarray {
namespace train {

void TrainConfig::Validate() const {
  if (batch_size == 0) throw ConfigError("TrainConfig", "batch_size must be >= 1");
  if (max_epochs == 0) throw ConfigError("TrainConfig", "max_epochs must be >= 1");
  if (patience == 0)
    throw ConfigError("TrainConfig", "patience must be >= 1");
  if (lambda < 0.0 || lambda > 1.0) throw ConfigError("TrainConfig", "lambda outside [0, 1]");
  if (label_smoothing < 0.0 || label_smoothing > 1.0)
    throw ConfigError("TrainConfig", "label_smoothing outside [0, 1]");
}

TrainConfig TrainConfig::FromConfig(const ConfigMap &cfg, const std::string &p) {
  TrainConfig t;
  t.batch_size = static_cast<size_t>(cfg.GetInt(p + "batch_size", t.batch_size));
  t.max_epochs = static_cast<size_t>(cfg.GetInt(p + "max_epochs", t.max_epochs));
  t.patience = static_cast<size_t>(cfg.GetInt(p + "patience", t.patience));
  t.seed = cfg.GetU64(p + "seed", t.seed);
  t.lambda = cfg.GetDouble(p + "lambda", t.lambda);
  t.label_smoothing = cfg.GetDouble(p + "label_smoothing", t.label_smoothing);
  t.optimizer.rho = cfg.GetDouble(p + "rho", t.optimizer.rho);
  t.optimizer.epsilon = cfg.GetDouble(p + "epsilon", t.optimizer.epsilon);
  t.optimizer.learning_rate = cfg.GetDouble(p + "learning_rate", t.optimizer.learning_rate);
  t.optimizer.clip_norm = cfg.GetDouble(p + "clip_norm", t.optimizer.clip_norm);
  t.augment = cfg.GetBool(p + "augment", t.augment);
  t.augment_policy = data::AugmentPolicy::FromConfig(cfg, p + "augment.");
  t.valid_wer = cfg.GetBool(p + "valid_wer", t.valid_wer);
  t.valid_beam = static_cast<size_t>(cfg.GetInt(p + "valid_beam", t.valid_beam));
  t.Validate();
  return t;
}

std::string EpochRecord::ToJson() const {
  nlohmann::ordered_json j;
  j["epoch"] = epoch;
  j["train_loss"] = train_loss;
  j["valid_loss"] = valid_loss;
  if (valid_wer >= 0.0)
    j["valid_wer"] = valid_wer;
  else
    j["valid_wer"] = nullptr;
  j["trainable_params"] = trainable_params;
  j["improved"] = improved;
  return j.dump();
}

TrainResult RunTraining(nn::ParameterStore *store, const TrainHooks &hooks,
                        const TrainConfig &cfg, const std::string &log_path) {
  cfg.Validate();
  if (hooks.num_train == 0) throw Error("train", "empty training set");
  std::ofstream log;
  if (!log_path.empty()) {
    log.open(log_path, std::ios::trunc);
    if (!log) throw Error("train", "cannot open log " + log_path);
  }
  AdaDelta opt(cfg.optimizer);
  TrainResult res;
  res.best_valid_loss = std::numeric_limits<double>::infinity();
  size_t bad_epochs = 0;
  std::vector<size_t> order(hooks.num_train);
  for (size_t epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    std::iota(order.begin(), order.end(), 0);
    Rng rng(Rng::Mix(cfg.seed, epoch));
    rng.Shuffle(&order);
    double total = 0.0;
    for (size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const size_t end = std::min(order.size(), start + cfg.batch_size);
      ad::Tape tape;
      std::vector<ad::Tensor> losses;
      for (size_t k = start; k < end; ++k) {
        const uint64_t aug_seed = Rng::Mix(cfg.seed, (epoch << 32) ^ order[k]);
        losses.push_back(hooks.train_loss(tape, order[k], aug_seed));
        total += losses.back().Item();
      }
      ad::Tensor batch = tape.Scale(tape.Sum(tape.Concat(losses, 1)),
                                    1.0 / static_cast<double>(end - start));
      tape.Backward(batch);
      opt.Step(store);
    }
    EpochRecord rec;
    rec.epoch = epoch;
    rec.train_loss = total / static_cast<double>(order.size());
    rec.valid_loss = hooks.valid_loss();
    if (hooks.valid_wer) rec.valid_wer = hooks.valid_wer();
    rec.trainable_params = store->NumTrainable();
    rec.improved = res.epochs.empty() || rec.valid_loss < res.best_valid_loss;
    if (rec.improved) {
      res.best = store->Clone();
      res.best_valid_loss = rec.valid_loss;
      res.best_epoch = epoch;
      bad_epochs = 0;
    } else {
      ++bad_epochs;
    }
    res.epochs.push_back(rec);
    if (log) log << rec.ToJson() << '\n' << std::flush;
    if (bad_epochs >= cfg.patience) {
      res.early_stopped = true;
      break;
    }
  }
  return res;
}

namespace {

model::StreamBundle Augmented(const model::StreamBundle &b, const TrainConfig &cfg,
                              uint64_t seed) {
  model::StreamBundle out = b;
  for (size_t i = 0; i < out.inputs.size(); ++i)
    out.inputs[i] = data::SpecAugment(out.inputs[i], cfg.augment_policy, Rng::Mix(seed, i));
  return out;
}

}  // namespace

TrainResult TrainModel(nn::ParameterStore init, const std::vector<model::StreamBundle> &train,
                       const std::vector<model::StreamBundle> &valid, const TrainConfig &cfg,
                       const std::string &log_path) {
  if (train.empty()) throw Error("train", "empty training set");
  if (valid.empty()) throw Error("train", "empty validation set");
  model::MemArrayModel model(init);
  for (const auto &b : train) model.CheckBundle(b);
  for (const auto &b : valid) model.CheckBundle(b);
  model::MtlConfig mtl;
  mtl.lambda = cfg.lambda;
  mtl.label_smoothing = cfg.label_smoothing;
  std::vector<std::vector<int>> labels;
  for (const auto &b : train) labels.push_back(b.labels);
  mtl.unigram = model::UnigramDistribution(labels, model.config().VocabSize());

  TrainHooks hooks;
  hooks.num_train = train.size();
  hooks.train_loss = [&](ad::Tape &tape, size_t i, uint64_t seed) {
    if (cfg.augment && !cfg.augment_policy.IsNoop())
      return model.ForwardMtl(tape, Augmented(train[i], cfg, seed), mtl).loss;
    return model.ForwardMtl(tape, train[i], mtl).loss;
  };
  hooks.valid_loss = [&]() {
    double total = 0.0;
    for (const auto &b : valid) {
      ad::Tape tape(false);
      total += model.ForwardMtl(tape, b, mtl).loss.Item();
    }
    return total / static_cast<double>(valid.size());
  };
  if (cfg.valid_wer) {
    hooks.valid_wer = [&]() {
      decode::BeamConfig beam;
      beam.beam_width = cfg.valid_beam;
      auto recs = decode::DecodeBundles(model, valid, beam);
      return metrics::Score(decode::References(valid, model.config().VocabSize()),
                            decode::Hypotheses(recs), metrics::Unit::kWord)
          .Rate();
    };
  }
  return RunTraining(&init, hooks, cfg, log_path);
}

std::vector<model::StreamBundle> PooledBundles(const std::vector<data::Utterance> &utts) {
  std::vector<model::StreamBundle> out;
  for (const auto &u : utts)
    for (const auto &s : u.streams) {
      model::StreamBundle b;
      b.utterance_id = u.streams.size() > 1 ? u.id + ".s" + std::to_string(s.stream_id) : u.id;
      b.mode = s.kind == data::FeatureKind::kUfe ? model::InputMode::kUfe
                                                  : model::InputMode::kFeatures;
      b.inputs.push_back(s.frames);
      b.labels = u.labels;
      out.push_back(std::move(b));
    }
  return out;
}

std::vector<model::StreamBundle> SingleStreamBundles(const std::vector<data::Utterance> &utts,
                                                     size_t stream) {
  std::vector<model::StreamBundle> out;
  for (const auto &u : utts) {
    if (stream >= u.streams.size())
      throw Error("bundles", StrCat(u.id, ": no stream ", stream));
    model::StreamBundle b;
    b.utterance_id = u.id;
    b.mode = u.streams[stream].kind == data::FeatureKind::kUfe ? model::InputMode::kUfe
                                                               : model::InputMode::kFeatures;
    b.inputs.push_back(u.streams[stream].frames);
    b.labels = u.labels;
    out.push_back(std::move(b));
  }
  return out;
}

std::vector<model::StreamBundle> ParallelBundles(const std::vector<data::Utterance> &utts) {
  std::vector<model::StreamBundle> out;
  for (const auto &u : utts) {
    if (u.streams.empty()) throw Error("bundles", u.id + ": no streams");
    model::StreamBundle b;
    b.utterance_id = u.id;
    b.mode = u.streams[0].kind == data::FeatureKind::kUfe ? model::InputMode::kUfe
                                                          : model::InputMode::kFeatures;
    for (const auto &s : u.streams) {
      if ((s.kind == data::FeatureKind::kUfe) != (b.mode == model::InputMode::kUfe))
        throw Error("bundles", u.id + ": mixed raw and UFE streams");
      b.inputs.push_back(s.frames);
    }
    b.labels = u.labels;
    out.push_back(std::move(b));
  }
  return out;
}

TrainResult TrainStage1(const model::ModelConfig &cfg, const std::vector<data::Utterance> &train,
                        const std::vector<data::Utterance> &valid, const TrainConfig &tcfg,
                        const std::string &log_path) {
  model::ModelConfig c = cfg;
  c.num_streams = 1;
  c.input_mode = model::InputMode::kFeatures;
  c.Finalize();
  return TrainModel(model::MemArrayModel::Create(c, tcfg.seed), PooledBundles(train),
                    PooledBundles(valid), tcfg, log_path);
}

std::vector<data::Utterance> ExtractUfeCorpus(const nn::ParameterStore &stage1,
                                              const std::vector<data::Utterance> &utts) {
  std::vector<data::Utterance> out;
  for (const auto &u : utts) {
    data::Utterance v = u;
    for (auto &s : v.streams) s = model::ExtractUfe(stage1, s);
    out.push_back(std::move(v));
  }
  return out;
}

TrainResult TrainStage2(const nn::ParameterStore &stage1,
                        const std::vector<data::Utterance> &ufe_train,
                        const std::vector<data::Utterance> &ufe_valid, const FreezePlan &plan,
                        const TrainConfig &tcfg, const std::string &log_path) {
  if (ufe_train.empty()) throw Error("train_stage2", "empty training set");
  const size_t N = ufe_train[0].streams.size();
  for (const auto *split : {&ufe_train, &ufe_valid})
    for (const auto &u : *split) {
      if (u.streams.size() != N)
        throw Error("train_stage2", StrCat(u.id, ": ", u.streams.size(), " streams, expected ", N));
      for (const auto &s : u.streams)
        if (s.kind != data::FeatureKind::kUfe)
          throw Error("train_stage2", u.id + ": stage 2 needs UFE features");
    }
  nn::ParameterStore init = InitStage2(stage1, N, plan, tcfg.seed);
  return TrainModel(std::move(init), ParallelBundles(ufe_train), ParallelBundles(ufe_valid),
                    tcfg, log_path);
}

TrainResult TrainJointBaseline(const model::ModelConfig &single, size_t num_streams,
                               const std::vector<data::Utterance> &train,
                               const std::vector<data::Utterance> &valid,
                               const TrainConfig &tcfg, const std::string &log_path) {
  model::ModelConfig c = single;
  c.num_streams = num_streams;
  c.input_mode = model::InputMode::kFeatures;
  c.Finalize();
  return TrainModel(model::MemArrayModel::Create(c, tcfg.seed), ParallelBundles(train),
                    ParallelBundles(valid), tcfg, log_path);
}

TrainResult TrainLm(const decode::LmConfig &cfg, const std::vector<std::vector<int>> &train,
                    const std::vector<std::vector<int>> &valid, const TrainConfig &tcfg,
                    const std::string &log_path) {
  if (valid.empty()) throw Error("train_lm", "empty validation set");
  nn::ParameterStore store = decode::RnnLm::Create(cfg, tcfg.seed);
  decode::RnnLm lm(store);
  TrainHooks hooks;
  hooks.num_train = train.size();
  hooks.train_loss = [&](ad::Tape &tape, size_t i, uint64_t) {
    return lm.SequenceLoss(tape, train[i]);
  };
  hooks.valid_loss = [&]() {
    double total = 0.0;
    for (const auto &v : valid) total -= lm.SequenceLogProb(v);
    return total / static_cast<double>(valid.size());
  };
  return RunTraining(&store, hooks, tcfg, log_path);
}

}  // namespace train
}  // namespace memarray
