// tools/memarray.cc

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

#include <filesystem>
#include <optional>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "base/binary-io.h"
#include "base/config-map.h"
#include "base/error.h"
#include "base/text-utils.h"
#include "data/corpus-synth.h"
#include "data/manifest.h"
#include "data/vocabulary.h"
#include "decode/corpus-decode.h"
#include "decode/decode-io.h"
#include "decode/rnn-lm.h"
#include "experiment/pipeline.h"
#include "fusion/fusion.h"
#include "metrics/report.h"
#include "metrics/score.h"
#include "model/model.h"
#include "train/freeze-plan.h"
#include "train/trainer.h"

namespace memarray {
namespace {

void Log(const std::string &verb, const std::string &msg) {
  std::cerr << "LOG (memarray " << verb << ") " << msg << '\n';
}

decode::LmConfig LmFrom(const ConfigMap &cfg) {
  decode::LmConfig lc;
  lc.vocab_size = data::CorpusSpec::FromConfig(cfg).vocab_size;
  lc.embed_dim = static_cast<size_t>(cfg.GetInt("lm.embed_dim", lc.embed_dim));
  lc.hidden_units = static_cast<size_t>(cfg.GetInt("lm.hidden_units", lc.hidden_units));
  return lc;
}

// All verbs share one flat key=value file.  It is checked as a whole so a
// misspelt key fails whichever verb reads it first.
ConfigMap LoadConfig(const std::string &path) {
  if (path.empty()) return ConfigMap();
  ConfigMap cfg = ConfigMap::FromFile(path);
  experiment::ExperimentConfig::FromConfig(cfg);
  LmFrom(cfg);
  cfg.CheckAllUsed();
  return cfg;
}

std::vector<data::Utterance> Load(const std::string &manifest, size_t vocab) {
  return data::LoadUtterances(data::ReadManifest(manifest), vocab);
}

void Report(const std::string &verb, const train::TrainResult &r, const std::string &out) {
  r.best.Save(out);
  Log(verb, StrCat("best epoch ", r.best_epoch, " of ", r.epochs.size(), ", valid loss ",
                   r.best_valid_loss, ", trainable params ", r.best.NumTrainable(), " of ",
                   r.best.NumParams(), (r.early_stopped ? ", stopped early" : ""), "; wrote ",
                   out));
}

struct TrainArgs {
  std::string config, train, valid, out, log;
};

void AddTrainArgs(CLI::App *app, TrainArgs *a) {
  app->add_option("--config", a->config, "key=value configuration file");
  app->add_option("--train", a->train, "training manifest")->required();
  app->add_option("--valid", a->valid, "validation manifest")->required();
  app->add_option("--out", a->out, "output checkpoint")->required();
  app->add_option("--log", a->log, "per-epoch JSON lines log");
}

experiment::ExperimentConfig ExperimentFrom(const ConfigMap &cfg, size_t input_dim) {
  auto e = experiment::ExperimentConfig::FromConfig(cfg);
  e.model.encoder.input_dim = input_dim;
  e.model.Finalize();
  return e;
}

size_t InputDim(const std::vector<data::Utterance> &utts, const std::string &what) {
  if (utts.empty() || utts[0].streams.empty()) throw Error("memarray", what + " is empty");
  return utts[0].streams[0].frames.Cols();
}

// "*.dec" files are decode records; anything else is "id text" lines.
metrics::TextMap ReadHypotheses(const std::string &path) {
  if (std::filesystem::path(path).extension() == ".dec")
    return decode::Hypotheses(decode::ReadDecodeFile(path));
  return metrics::ReadTextFile(path);
}

}  // namespace
}  // namespace memarray

int main(int argc, char **argv) {
  using namespace memarray;
  CLI::App app{"Multi-stream end-to-end recognition with two-stage training"};
  app.require_subcommand(1);

  // gen-corpus
  std::string gc_config, gc_out;
  uint64_t gc_seed = 0;
  auto *gen = app.add_subcommand("gen-corpus", "generate the synthetic multi-stream corpus");
  gen->add_option("--config", gc_config, "key=value configuration file");
  gen->add_option("--seed", gc_seed, "overrides corpus.seed");
  gen->add_option("--out", gc_out, "output directory")->required();
  gen->callback([&]() {
    ConfigMap cfg = LoadConfig(gc_config);
    if (gen->count("--seed")) cfg.Set("corpus.seed", std::to_string(gc_seed));
    data::CorpusSpec spec = data::CorpusSpec::FromConfig(cfg);
    auto corpus = data::GenerateCorpus(spec);
    data::WriteCorpus(corpus, gc_out);
    Log("gen-corpus", StrCat(corpus.train.size(), "/", corpus.valid.size(), "/",
                             corpus.test.size(), " utterances, checksum ",
                             experiment::CorpusChecksum(corpus), "; wrote ", gc_out));
  });

  // train-stage1
  TrainArgs s1;
  auto *stage1 = app.add_subcommand("train-stage1", "train the single-stream model on pooled streams");
  AddTrainArgs(stage1, &s1);
  stage1->callback([&]() {
    ConfigMap cfg = LoadConfig(s1.config);
    const size_t vocab = data::CorpusSpec::FromConfig(cfg).vocab_size;
    auto tr = Load(s1.train, vocab), va = Load(s1.valid, vocab);
    auto e = ExperimentFrom(cfg, InputDim(tr, s1.train));
    Report("train-stage1", train::TrainStage1(e.model, tr, va, e.train, s1.log), s1.out);
  });

  // extract-ufe
  std::string ex_model, ex_manifest, ex_dir, ex_name;
  auto *extract = app.add_subcommand("extract-ufe", "write encoder outputs of a stage-1 model");
  extract->add_option("--model", ex_model, "stage-1 checkpoint")->required();
  extract->add_option("--manifest", ex_manifest, "raw feature manifest")->required();
  extract->add_option("--out-dir", ex_dir, "output directory")->required();
  extract->add_option("--name", ex_name, "output manifest name (<name>.tsv)")->required();
  extract->callback([&]() {
    auto store = nn::ParameterStore::Load(ex_model);
    const size_t vocab = model::MemArrayModel::ConfigOf(store).decoder.vocab_size;
    auto ufe = train::ExtractUfeCorpus(store, Load(ex_manifest, vocab));
    data::WriteUtterances(ufe, ex_dir, ex_name);
    Log("extract-ufe", StrCat(ufe.size(), " utterances, checksum ",
                              experiment::FeatureChecksum(ufe), "; wrote ", ex_dir, "/",
                              ex_name, ".tsv"));
  });

  // train-stage2
  TrainArgs s2;
  std::string s2_stage1, s2_plan = "freeze-all";
  auto *stage2 = app.add_subcommand("train-stage2", "train the stream attention on UFE features");
  AddTrainArgs(stage2, &s2);
  stage2->add_option("--stage1", s2_stage1, "stage-1 checkpoint")->required();
  stage2->add_option("--freeze-plan", s2_plan,
                     "one of: " + Join(train::FreezePlan::PresetNames(), ", "));
  stage2->callback([&]() {
    ConfigMap cfg = LoadConfig(s2.config);
    auto store = nn::ParameterStore::Load(s2_stage1);
    const size_t vocab = model::MemArrayModel::ConfigOf(store).decoder.vocab_size;
    auto tcfg = train::TrainConfig::FromConfig(cfg, "train.");
    auto plan = train::FreezePlan::Preset(s2_plan);
    Report("train-stage2",
           train::TrainStage2(store, Load(s2.train, vocab), Load(s2.valid, vocab), plan, tcfg,
                              s2.log),
           s2.out);
  });

  // train-joint
  TrainArgs jt;
  auto *joint = app.add_subcommand("train-joint", "train the full multi-stream model end to end");
  AddTrainArgs(joint, &jt);
  joint->callback([&]() {
    ConfigMap cfg = LoadConfig(jt.config);
    const size_t vocab = data::CorpusSpec::FromConfig(cfg).vocab_size;
    auto tr = Load(jt.train, vocab), va = Load(jt.valid, vocab);
    auto e = ExperimentFrom(cfg, InputDim(tr, jt.train));
    Report("train-joint",
           train::TrainJointBaseline(e.model, tr[0].streams.size(), tr, va, e.train, jt.log),
           jt.out);
  });

  // train-lm
  TrainArgs lm;
  auto *train_lm = app.add_subcommand("train-lm", "train the character language model");
  train_lm->add_option("--config", lm.config, "key=value configuration file");
  train_lm->add_option("--train", lm.train, "training transcripts (id text)")->required();
  train_lm->add_option("--valid", lm.valid, "validation transcripts (id text)")->required();
  train_lm->add_option("--out", lm.out, "output checkpoint")->required();
  train_lm->add_option("--log", lm.log, "per-epoch JSON lines log");
  train_lm->callback([&]() {
    ConfigMap cfg = LoadConfig(lm.config);
    decode::LmConfig lc = LmFrom(cfg);
    auto tcfg = train::TrainConfig::FromConfig(cfg, "train.");
    tcfg.valid_wer = false;
    data::Vocabulary v(lc.vocab_size);
    auto labels = [&](const std::string &path) {
      std::vector<std::vector<int>> out;
      for (const auto &[id, text] : metrics::ReadTextFile(path)) out.push_back(v.Encode(text));
      return out;
    };
    Report("train-lm", train::TrainLm(lc, labels(lm.train), labels(lm.valid), tcfg, lm.log),
           lm.out);
  });

  // decode
  std::string dc_model, dc_manifest, dc_out, dc_lm, dc_config;
  size_t dc_stream = 0;
  auto *dec = app.add_subcommand("decode", "joint attention/CTC beam search");
  dec->add_option("--model", dc_model, "model checkpoint")->required();
  dec->add_option("--manifest", dc_manifest, "feature manifest")->required();
  dec->add_option("--out", dc_out, "output decode file")->required();
  dec->add_option("--config", dc_config, "key=value file with beam.* settings");
  dec->add_option("--lm", dc_lm, "language model checkpoint");
  dec->add_option("--stream", dc_stream, "stream to decode with a single-stream model");
  dec->callback([&]() {
    ConfigMap cfg = LoadConfig(dc_config);
    auto beam = experiment::ExperimentConfig::FromConfig(cfg).beam;
    auto store = nn::ParameterStore::Load(dc_model);
    model::MemArrayModel m(store);
    const auto &mc = m.config();
    auto utts = Load(dc_manifest, mc.decoder.vocab_size);
    auto bundles = mc.num_streams == 1 ? train::SingleStreamBundles(utts, dc_stream)
                                       : train::ParallelBundles(utts);
    std::optional<nn::ParameterStore> lm_store;
    std::optional<decode::RnnLm> lm_model;
    if (!dc_lm.empty()) {
      lm_store = nn::ParameterStore::Load(dc_lm);
      lm_model.emplace(*lm_store);
    }
    decode::SimplexStats stats;
    auto recs = decode::DecodeBundles(m, bundles, beam, lm_model ? &*lm_model : nullptr, &stats);
    decode::WriteDecodeFile(dc_out, recs);
    auto rep = metrics::Score(decode::References(bundles, mc.decoder.vocab_size),
                              decode::Hypotheses(recs), metrics::Unit::kWord);
    Log("decode", StrCat(recs.size(), " utterances, WER ", FormatDouble(100.0 * rep.Rate()),
                         "%, simplex violations ", stats.violations, "; wrote ", dc_out));
  });

  // fuse-signal, fuse-concat
  std::string fu_manifest, fu_dir, fu_name;
  size_t fu_vocab = 8;
  auto add_fuse = [&](const char *name, const char *help, bool average) {
    auto *sub = app.add_subcommand(name, help);
    sub->add_option("--manifest", fu_manifest, "multi-stream manifest")->required();
    sub->add_option("--out-dir", fu_dir, "output directory")->required();
    sub->add_option("--name", fu_name, "output manifest name (<name>.tsv)")->required();
    sub->add_option("--vocab-size", fu_vocab, "character vocabulary size");
    sub->callback([&, name, average]() {
      auto utts = Load(fu_manifest, fu_vocab);
      auto fused = average ? fusion::SignalAverage(utts) : fusion::FrameConcat(utts);
      data::WriteUtterances(fused, fu_dir, fu_name);
      Log(name, StrCat(fused.size(), " utterances, dim ", InputDim(fused, fu_manifest),
                       "; wrote ", fu_dir, "/", fu_name, ".tsv"));
    });
  };
  add_fuse("fuse-signal", "frame-wise average of the streams", true);
  add_fuse("fuse-concat", "frame-wise concatenation of the streams", false);

  // rover
  std::vector<std::string> rv_inputs;
  std::string rv_out;
  bool rv_weighted = false;
  auto *rover = app.add_subcommand("rover", "word-level voting over decode files");
  rover->add_option("inputs", rv_inputs, "decode files")->required();
  rover->add_option("--out", rv_out, "fused decode file")->required();
  rover->add_flag("--score-weighted", rv_weighted, "weight votes by exp(joint score)");
  rover->callback([&]() {
    std::vector<std::vector<decode::DecodeRecord>> systems;
    for (const auto &p : rv_inputs) systems.push_back(decode::ReadDecodeFile(p));
    fusion::RoverOptions opts;
    opts.score_weighted = rv_weighted;
    auto out = fusion::RoverRecords(systems, opts);
    decode::WriteDecodeFile(rv_out, out);
    Log("rover", StrCat(out.size(), " utterances from ", systems.size(), " systems; wrote ",
                        rv_out));
  });

  // score
  std::string sc_ref, sc_hyp, sc_unit = "word";
  bool sc_verbose = false;
  auto *score = app.add_subcommand("score", "word or character error rate");
  score->add_option("--ref", sc_ref, "references (id text)")->required();
  score->add_option("--hyp", sc_hyp, "hypotheses: decode file (.dec) or id text lines")
      ->required();
  score->add_option("--unit", sc_unit, "word or char")
      ->check(CLI::IsMember({"word", "char"}));
  score->add_flag("--verbose", sc_verbose, "per-utterance counts");
  score->callback([&]() {
    auto rep = metrics::Score(metrics::ReadTextFile(sc_ref), ReadHypotheses(sc_hyp),
                              sc_unit == "char" ? metrics::Unit::kChar : metrics::Unit::kWord);
    if (sc_verbose) {
      std::cout << rep.ToText();
    } else {
      const auto &t = rep.total;
      std::cout << (sc_unit == "char" ? "%CER " : "%WER ") << FormatDouble(100.0 * rep.Rate())
                << " [ " << t.Errors() << " / " << t.reference_length << ", "
                << t.insertions << " ins, " << t.deletions << " del, " << t.substitutions
                << " sub ]\n";
    }
  });

  // compare-fusion
  std::string cf_config, cf_txt, cf_tsv;
  auto *compare = app.add_subcommand("compare-fusion", "WER table over decoded systems");
  compare->add_option("--config", cf_config, "JSON description of the systems")->required();
  compare->add_option("--out", cf_txt, "aligned text table (default stdout)");
  compare->add_option("--tsv", cf_tsv, "tab-separated table");
  compare->callback([&]() {
    auto table = metrics::CompareFusionFromJson(cf_config);
    if (cf_txt.empty()) std::cout << table.ToText();
    else AtomicWriteFile(cf_txt, table.ToText());
    if (!cf_tsv.empty()) AtomicWriteFile(cf_tsv, table.ToTsv());
  });

  // beta-trace
  std::string bt_in, bt_out;
  auto *beta = app.add_subcommand("beta-trace", "per-step stream weights of a decode");
  beta->add_option("--decode", bt_in, "decode file")->required();
  beta->add_option("--out", bt_out, "output file (default stdout)");
  beta->callback([&]() {
    auto recs = decode::ReadDecodeFile(bt_in);
    const std::string trace = metrics::BetaTrace(recs);
    if (bt_out.empty()) std::cout << trace;
    else AtomicWriteFile(bt_out, trace);
    std::vector<std::string> mean;
    for (double b : metrics::MeanBeta(recs)) mean.push_back(FormatDouble(b));
    Log("beta-trace", "mean stream weights " + Join(mean, " "));
  });

  // run-experiment
  std::string rx_config, rx_dir;
  uint64_t rx_seed = 1;
  auto *run = app.add_subcommand("run-experiment", "corpus, both stages, baselines and tables");
  run->add_option("--config", rx_config, "key=value configuration file");
  run->add_option("--seed", rx_seed, "corpus and training seed");
  run->add_option("--work-dir", rx_dir, "artifact directory")->required();
  run->callback([&]() {
    experiment::ExperimentConfig e;
    if (rx_config.empty()) {
      e = experiment::ExperimentConfig::Default(rx_seed);
    } else {
      ConfigMap cfg = LoadConfig(rx_config);
      if (run->count("--seed")) {
        cfg.Set("corpus.seed", std::to_string(rx_seed));
        cfg.Set("train.seed", std::to_string(rx_seed));
      }
      e = experiment::ExperimentConfig::FromConfig(cfg);
    }
    e.work_dir = rx_dir;
    auto res = experiment::RunPipeline(e);
    std::cout << res.report;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    return app.exit(e);
  } catch (const std::exception &e) {
    std::cerr << "ERROR (memarray) " << e.what() << '\n';
    return 1;
  }
  return 0;
}
