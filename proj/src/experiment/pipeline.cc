// experiment/pipeline.cc

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

#include "experiment/pipeline.h"

#include <chrono>
#include <filesystem>

#include "base/binary-io.h"
#include "base/checksum.h"
#include "base/error.h"
#include "base/random.h"
#include "data/feature-io.h"
#include "decode/corpus-decode.h"
#include "fusion/fusion.h"
#include "json.hpp"

namespace memarray {
namespace experiment {

namespace fs = std::filesystem;

ExperimentConfig ExperimentConfig::Default(uint64_t seed) {
  ExperimentConfig c;
  c.corpus.num_streams = 2;
  c.corpus.streams.assign(2, data::CorruptionProfile());
  c.corpus.seed = seed;
  c.model.encoder.input_dim = c.corpus.feature_dim;
  c.model.decoder.vocab_size = c.corpus.vocab_size;
  c.model.Finalize();
  c.train.seed = seed;
  c.beam.beam_width = 4;
  return c;
}

ExperimentConfig ExperimentConfig::FromConfig(const ConfigMap &cfg) {
  ExperimentConfig c;
  c.corpus = data::CorpusSpec::FromConfig(cfg);
  c.model = model::ModelConfig::FromConfig(cfg);
  c.model.encoder.input_dim = c.corpus.feature_dim;
  c.model.decoder.vocab_size = c.corpus.vocab_size;
  c.model.num_streams = 1;
  c.model.input_mode = model::InputMode::kFeatures;
  c.model.Finalize();
  c.train = train::TrainConfig::FromConfig(cfg, "train.");
  c.beam.beam_width = static_cast<size_t>(cfg.GetInt("beam.width", 4));
  c.beam.ctc_weight = cfg.GetDouble("beam.ctc_weight", c.beam.ctc_weight);
  c.beam.lm_weight = cfg.GetDouble("beam.lm_weight", c.beam.lm_weight);
  c.beam.length_penalty = cfg.GetDouble("beam.length_penalty", c.beam.length_penalty);
  c.beam.max_length_ratio = cfg.GetDouble("beam.max_length_ratio", c.beam.max_length_ratio);
  c.beam.eos_threshold = cfg.GetDouble("beam.eos_threshold", c.beam.eos_threshold);
  c.beam.max_length = static_cast<size_t>(cfg.GetInt("beam.max_length", 0));
  c.beam.Validate();
  c.per_stream_models = cfg.GetBool("experiment.per_stream_models", true);
  c.stage2_scratch = cfg.GetBool("experiment.stage2_scratch", true);
  c.joint_baseline = cfg.GetBool("experiment.joint_baseline", true);
  c.fusion_baselines = cfg.GetBool("experiment.fusion_baselines", true);
  c.work_dir = cfg.GetString("experiment.work_dir", "");
  return c;
}

const SystemResult *PipelineResult::Find(const std::string &name) const {
  for (const auto &s : systems)
    if (s.name == name) return &s;
  return nullptr;
}

uint64_t FeatureChecksum(const std::vector<data::Utterance> &utts) {
  Fnv1a64 h;
  for (const auto &u : utts) {
    h.Update(u.transcript);
    for (const auto &s : u.streams) h.Update(data::EncodeFeatures(s));
  }
  return h.Digest();
}

uint64_t CorpusChecksum(const data::Corpus &c) {
  Fnv1a64 h;
  for (const auto *split : {&c.train, &c.valid, &c.test}) {
    const uint64_t d = FeatureChecksum(*split);
    h.Update(std::string_view(reinterpret_cast<const char *>(&d), sizeof(d)));
  }
  return h.Digest();
}

double DecodeWer(const nn::ParameterStore &store, const std::vector<model::StreamBundle> &bundles,
                 const decode::BeamConfig &beam, std::vector<decode::DecodeRecord> *records,
                 decode::SimplexStats *stats) {
  model::MemArrayModel m(store);
  auto recs = decode::DecodeBundles(m, bundles, beam, nullptr, stats);
  const double wer = metrics::Score(decode::References(bundles, m.config().VocabSize()),
                                    decode::Hypotheses(recs), metrics::Unit::kWord)
                         .Rate();
  if (records) *records = std::move(recs);
  return wer;
}

namespace {

size_t FrozenParams(const nn::ParameterStore &s) { return s.NumParams() - s.NumTrainable(); }

std::string LogPath(const ExperimentConfig &cfg, const std::string &name) {
  return cfg.work_dir.empty() ? "" : (fs::path(cfg.work_dir) / (name + ".log.jsonl")).string();
}

void SaveCheckpoint(const ExperimentConfig &cfg, const std::string &name,
                    const nn::ParameterStore &s) {
  if (!cfg.work_dir.empty()) s.Save((fs::path(cfg.work_dir) / (name + ".ckpt")).string());
}

}  // namespace

PipelineResult RunPipeline(const ExperimentConfig &cfg) {
  PipelineResult res;
  const size_t N = cfg.corpus.num_streams;
  if (N < 2) throw ConfigError("experiment", "the comparison needs at least 2 streams");
  if (!cfg.work_dir.empty()) fs::create_directories(cfg.work_dir);

  const data::Corpus corpus = data::GenerateCorpus(cfg.corpus);
  res.corpus_checksum = CorpusChecksum(corpus);
  if (!cfg.work_dir.empty()) data::WriteCorpus(corpus, (fs::path(cfg.work_dir) / "corpus").string());

  model::ModelConfig single = cfg.model;
  single.num_streams = 1;
  single.input_mode = model::InputMode::kFeatures;
  single.encoder.input_dim = cfg.corpus.feature_dim;
  single.decoder.vocab_size = cfg.corpus.vocab_size;
  single.Finalize();

  // Stage 1 on pooled streams.
  const auto stage1_start = std::chrono::steady_clock::now();
  train::TrainResult stage1 =
      train::TrainStage1(single, corpus.train, corpus.valid, cfg.train, LogPath(cfg, "stage1"));
  res.stage1_checksum = stage1.best.Checksum();
  SaveCheckpoint(cfg, "stage1", stage1.best);
  for (size_t i = 0; i < N; ++i)
    res.pooled_valid_wer.push_back(
        DecodeWer(stage1.best, train::SingleStreamBundles(corpus.valid, i), cfg.beam));

  if (cfg.per_stream_models) {
    for (size_t i = 0; i < N; ++i) {
      const std::string name = "stream" + std::to_string(i);
      train::TrainResult r = train::TrainModel(
          model::MemArrayModel::Create(single, cfg.train.seed),
          train::SingleStreamBundles(corpus.train, i), train::SingleStreamBundles(corpus.valid, i),
          cfg.train, LogPath(cfg, name));
      SaveCheckpoint(cfg, name, r.best);
      res.stream_valid_wer.push_back(
          DecodeWer(r.best, train::SingleStreamBundles(corpus.valid, i), cfg.beam));
    }
  }
  res.stage1_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - stage1_start).count();

  // UFE extraction and Stage 2.
  const auto ufe_train = train::ExtractUfeCorpus(stage1.best, corpus.train);
  const auto ufe_valid = train::ExtractUfeCorpus(stage1.best, corpus.valid);
  const auto ufe_test = train::ExtractUfeCorpus(stage1.best, corpus.test);
  res.ufe_checksum = FeatureChecksum(ufe_train);
  const size_t encoder_params = stage1.best.NumParams(nn::Component::kEncoder);

  auto add_system = [&](const std::string &name, const nn::ParameterStore &store,
                        const std::vector<model::StreamBundle> &test, size_t extra_frozen,
                        decode::SimplexStats *stats) {
    SystemResult s;
    s.name = name;
    s.trainable_params = store.NumTrainable();
    s.frozen_params = FrozenParams(store) + extra_frozen;
    s.checksum = store.Checksum();
    s.test_wer = DecodeWer(store, test, cfg.beam, &s.test_records, stats);
    SaveCheckpoint(cfg, name, store);
    res.systems.push_back(std::move(s));
  };

  const auto ufe_test_bundles = train::ParallelBundles(ufe_test);
  {
    train::TrainResult r = train::TrainStage2(stage1.best, ufe_train, ufe_valid,
                                              train::FreezePlan::Preset("att-dec-ctc-freeze"),
                                              cfg.train, LogPath(cfg, kTwoStage));
    add_system(kTwoStage, r.best, ufe_test_bundles, encoder_params, &res.simplex);
    res.mean_beta = metrics::MeanBeta(res.systems.back().test_records);
  }
  if (cfg.stage2_scratch) {
    train::TrainResult r =
        train::TrainStage2(stage1.best, ufe_train, ufe_valid, train::FreezePlan::Preset("scratch"),
                           cfg.train, LogPath(cfg, kStage2Scratch));
    add_system(kStage2Scratch, r.best, ufe_test_bundles, encoder_params, nullptr);
  }
  {
    model::ModelConfig joint = single;
    joint.num_streams = N;
    joint.Finalize();
    res.joint_params = model::MemArrayModel::Create(joint, cfg.train.seed).NumParams();
  }
  if (cfg.joint_baseline) {
    train::TrainResult r = train::TrainJointBaseline(single, N, corpus.train, corpus.valid,
                                                     cfg.train, LogPath(cfg, kJoint));
    add_system(kJoint, r.best, train::ParallelBundles(corpus.test), 0, nullptr);
  }
  if (cfg.fusion_baselines) {
    {
      auto tr = fusion::SignalAverage(corpus.train), va = fusion::SignalAverage(corpus.valid),
           te = fusion::SignalAverage(corpus.test);
      train::TrainResult r = train::TrainStage1(single, tr, va, cfg.train, LogPath(cfg, kSignalAverage));
      add_system(kSignalAverage, r.best, train::ParallelBundles(te), 0, nullptr);
    }
    {
      auto tr = fusion::FrameConcat(corpus.train), va = fusion::FrameConcat(corpus.valid),
           te = fusion::FrameConcat(corpus.test);
      model::ModelConfig cat = single;
      cat.encoder.input_dim = N * cfg.corpus.feature_dim;
      cat.Finalize();
      train::TrainResult r = train::TrainStage1(cat, tr, va, cfg.train, LogPath(cfg, kFrameConcat));
      add_system(kFrameConcat, r.best, train::ParallelBundles(te), 0, nullptr);
    }
    {
      std::vector<std::vector<decode::DecodeRecord>> per_stream;
      for (size_t i = 0; i < N; ++i) {
        std::vector<decode::DecodeRecord> recs;
        DecodeWer(stage1.best, train::SingleStreamBundles(corpus.test, i), cfg.beam, &recs);
        per_stream.push_back(std::move(recs));
      }
      SystemResult s;
      s.name = kRover;
      s.trainable_params = stage1.best.NumTrainable();
      s.frozen_params = 0;
      s.checksum = stage1.best.Checksum();
      s.test_records = fusion::RoverRecords(per_stream, {});
      s.test_wer = metrics::Score(decode::References(ufe_test_bundles, single.VocabSize()),
                                  decode::Hypotheses(s.test_records), metrics::Unit::kWord)
                       .Rate();
      res.systems.push_back(std::move(s));
    }
  }

  // Comparison table, through the files when a work directory is given.
  const std::string column = std::to_string(N) + "-stream";
  if (!cfg.work_dir.empty()) {
    const fs::path dir(cfg.work_dir);
    std::string refs;
    for (const auto &[id, text] : decode::References(ufe_test_bundles, single.VocabSize()))
      refs += id + ' ' + text + '\n';
    AtomicWriteFile((dir / "test.ref").string(), refs);
    nlohmann::ordered_json j;
    j["references"] = "test.ref";
    j["columns"] = {column};
    j["systems"] = nlohmann::json::array();
    for (const auto &s : res.systems) {
      const std::string file = "test." + s.name + ".dec";
      decode::WriteDecodeFile((dir / file).string(), s.test_records);
      j["systems"].push_back({{"name", s.name},
                              {"trainable_params", s.trainable_params},
                              {"frozen_params", s.frozen_params},
                              {"decodes", {{column, file}}}});
    }
    AtomicWriteFile((dir / "compare.json").string(), j.dump(2) + "\n");
    metrics::ComparisonTable t = metrics::CompareFusionFromJson((dir / "compare.json").string());
    res.report = t.ToText();
    AtomicWriteFile((dir / "compare.txt").string(), res.report);
    AtomicWriteFile((dir / "compare.tsv").string(), t.ToTsv());
    AtomicWriteFile((dir / "beta-trace.tsv").string(),
                    metrics::BetaTrace(res.Find(kTwoStage)->test_records));
  } else {
    metrics::ComparisonTable t;
    t.columns = {column};
    for (const auto &s : res.systems)
      t.rows.push_back({s.name, s.trainable_params, s.frozen_params, {100.0 * s.test_wer}});
    res.report = t.ToText();
  }
  return res;
}

}  // namespace experiment
}  // namespace memarray
