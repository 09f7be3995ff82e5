#include <cmath>
#include <vector>

#include "base/error.h"
#include "base/random.h"
#include "data/corpus-synth.h"
#include "doctest.h"
#include "model/model.h"
#include "train/adadelta.h"
#include "train/freeze-plan.h"
#include "train/trainer.h"

namespace memarray {
namespace train {

using nn::Component;

namespace {

data::CorpusSpec TinySpec(size_t streams, uint64_t seed = 1) {
  data::CorpusSpec s;
  s.vocab_size = 4;
  s.lexicon_size = 5;
  s.train_utterances = 10;
  s.valid_utterances = 4;
  s.test_utterances = 2;
  s.min_label_length = 2;
  s.max_label_length = 4;
  s.feature_dim = 3;
  s.num_streams = streams;
  s.streams.assign(streams, data::CorruptionProfile());
  s.seed = seed;
  return s;
}

model::ModelConfig TinyModel() {
  model::ModelConfig c;
  c.encoder.input_dim = 3;
  c.encoder.conv_layers = {{4, 2, 3}, {4, 2, 3}};
  c.encoder.hidden_units = 3;
  c.encoder.projection_units = 4;
  c.frame_attention.attention_dim = 3;
  c.frame_attention.conv_channels = 2;
  c.frame_attention.conv_width = 3;
  c.stream_attention.attention_dim = 3;
  c.decoder.vocab_size = 4;
  c.decoder.embed_dim = 2;
  c.decoder.hidden_units = 3;
  c.Finalize();
  return c;
}

TrainConfig FastTrain(size_t epochs = 2) {
  TrainConfig t;
  t.batch_size = 4;
  t.max_epochs = epochs;
  t.valid_wer = false;
  return t;
}

nn::ParameterStore OneTensorStore(std::vector<double> values) {
  nn::ParameterStore s;
  const size_t n = values.size();
  s.Insert("w", Component::kDecoder, ad::Tensor::FromValues({n}, std::move(values), true));
  return s;
}

}  // namespace

TEST_CASE("adadelta first step by hand") {
  auto store = OneTensorStore({1.0, -2.0});
  const ad::Tensor &w = store.Get("w");
  const_cast<ad::Tensor &>(w).MutableGrad() = {0.5, -1.0};
  AdaDeltaConfig cfg;
  cfg.clip_norm = 0.0;
  AdaDelta opt(cfg);
  opt.Step(&store);
  for (int i = 0; i < 2; ++i) {
    const double g = i == 0 ? 0.5 : -1.0;
    const double eg = 0.05 * g * g;
    const double dx = -std::sqrt(1e-8) / std::sqrt(eg + 1e-8) * g;
    const double expect = (i == 0 ? 1.0 : -2.0) + dx;
    CHECK(std::abs(w.Values()[i] - expect) < 1e-15);
  }
  // Second step uses the accumulated update.
  const double eg0 = 0.05 * 0.25;
  const double dx0 = -std::sqrt(1e-8) / std::sqrt(eg0 + 1e-8) * 0.5;
  const double ex0 = 0.05 * dx0 * dx0;
  const double before = w.Values()[0];
  const_cast<ad::Tensor &>(w).MutableGrad() = {0.5, -1.0};
  opt.Step(&store);
  const double eg1 = 0.95 * eg0 + 0.05 * 0.25;
  const double dx1 = -std::sqrt(ex0 + 1e-8) / std::sqrt(eg1 + 1e-8) * 0.5;
  CHECK(std::abs(w.Values()[0] - (before + dx1)) < 1e-15);
}

TEST_CASE("adadelta clips the global norm and skips frozen parameters") {
  nn::ParameterStore store;
  store.Insert("a", Component::kDecoder, ad::Tensor::FromValues({2}, {0.0, 0.0}, true));
  store.Insert("b", Component::kHan, ad::Tensor::FromValues({1}, {0.0}, true));
  const_cast<ad::Tensor &>(store.Get("a")).MutableGrad() = {30.0, 40.0};
  const_cast<ad::Tensor &>(store.Get("b")).MutableGrad() = {0.0};
  CHECK(GradientNorm(store) == doctest::Approx(50.0));
  AdaDeltaConfig cfg;
  AdaDelta opt(cfg);
  CHECK(opt.Step(&store) == doctest::Approx(50.0));
  // Clipped gradient is (3, 4).
  const double g = 3.0, eg = 0.05 * g * g;
  CHECK(std::abs(store.Get("a").Values()[0] + std::sqrt(1e-8) / std::sqrt(eg + 1e-8) * g) < 1e-15);

  store.SetFrozen(Component::kDecoder, true);
  const double a0 = store.Get("a").Values()[0];
  const_cast<ad::Tensor &>(store.Get("a")).MutableGrad() = {1.0, 1.0};
  const_cast<ad::Tensor &>(store.Get("b")).MutableGrad() = {1.0};
  CHECK(GradientNorm(store) == doctest::Approx(1.0));
  opt.Step(&store);
  CHECK(store.Get("a").Values()[0] == a0);
  CHECK(store.Get("b").Values()[0] != 0.0);
}

TEST_CASE("freeze plan presets") {
  auto names = FreezePlan::PresetNames();
  CHECK(names.size() == 7);
  auto all = FreezePlan::Preset("freeze-all");
  CHECK(all.frame_att.from_stage1);
  CHECK(!all.frame_att.trainable);
  CHECK(all.decoder.from_stage1);
  CHECK(!all.decoder.trainable);
  CHECK(all.ctc.from_stage1);
  CHECK(!all.ctc.trainable);
  auto ft = FreezePlan::Preset("att-dec-finetune");
  CHECK(ft.frame_att.from_stage1);
  CHECK(ft.frame_att.trainable);
  CHECK(ft.decoder.from_stage1);
  CHECK(!ft.ctc.from_stage1);
  auto scratch = FreezePlan::Preset("scratch");
  CHECK(!scratch.frame_att.from_stage1);
  CHECK(scratch.decoder.trainable);
  CHECK_THROWS_AS(FreezePlan::Preset("nope"), ConfigError);
  FreezePlan bad;
  bad.decoder.trainable = false;  // frozen random weights
  CHECK_THROWS_AS(bad.Validate(), ConfigError);
}

TEST_CASE("InitStage2 copies stage-1 weights into every stream") {
  auto s1 = model::MemArrayModel::Create(TinyModel(), 7);
  auto store = InitStage2(s1, 3, FreezePlan::Preset("freeze-all"), 9);
  for (size_t i = 0; i < 3; ++i)
    for (const auto &e : s1.Entries()) {
      std::string name = e.name;
      if (name.rfind("frame_att.0.", 0) == 0) name = model::FrameAttName(i) + name.substr(11);
      else if (name.rfind("ctc.0.", 0) == 0) name = model::CtcName(i) + name.substr(5);
      else if (name.rfind("dec.", 0) != 0) continue;
      REQUIRE(store.Has(name));
      auto a = e.tensor.Values(), b = store.Get(name).Values();
      CHECK(std::equal(a.begin(), a.end(), b.begin(), b.end()));
    }
  CHECK(store.IsFrozen(Component::kFrameAtt));
  CHECK(store.IsFrozen(Component::kDecoder));
  CHECK(store.IsFrozen(Component::kCtc));
  CHECK(!store.IsFrozen(Component::kHan));
  CHECK(!store.HasComponent(Component::kEncoder));
  CHECK(store.NumTrainable() == store.NumParams(Component::kHan));
  CHECK_THROWS(InitStage2(store, 2, FreezePlan::Preset("freeze-all"), 1));
}

TEST_CASE("frozen components are untouched by stage-2 training") {
  auto corpus = data::GenerateCorpus(TinySpec(2));
  auto s1 = model::MemArrayModel::Create(TinyModel(), 3);
  auto ufe_train = ExtractUfeCorpus(s1, corpus.train);
  auto ufe_valid = ExtractUfeCorpus(s1, corpus.valid);
  auto init = InitStage2(s1, 2, FreezePlan::Preset("freeze-all"), FastTrain().seed);
  auto res = TrainStage2(s1, ufe_train, ufe_valid, FreezePlan::Preset("freeze-all"), FastTrain());
  for (Component c : {Component::kFrameAtt, Component::kDecoder, Component::kCtc})
    CHECK(res.best.Checksum(c) == init.Checksum(c));
  CHECK(res.best.Checksum(Component::kHan) != init.Checksum(Component::kHan));
  for (const auto &e : res.epochs) CHECK(e.trainable_params == init.NumParams(Component::kHan));

  auto ft = TrainStage2(s1, ufe_train, ufe_valid, FreezePlan::Preset("att-finetune"), FastTrain());
  CHECK(ft.best.Checksum(Component::kFrameAtt) != init.Checksum(Component::kFrameAtt));
}

TEST_CASE("stage 2 input checks") {
  auto corpus = data::GenerateCorpus(TinySpec(2));
  auto s1 = model::MemArrayModel::Create(TinyModel(), 3);
  auto ufe = ExtractUfeCorpus(s1, corpus.train);
  auto valid = ExtractUfeCorpus(s1, corpus.valid);
  CHECK_THROWS(TrainStage2(s1, corpus.train, corpus.valid, FreezePlan::Preset("freeze-all"),
                           FastTrain()));
  ufe[3].streams.pop_back();
  CHECK_THROWS(TrainStage2(s1, ufe, valid, FreezePlan::Preset("freeze-all"), FastTrain()));
  CHECK_THROWS(SingleStreamBundles(corpus.train, 2));
}

TEST_CASE("early stopping follows the validation loss") {
  auto store = OneTensorStore({0.0});
  const ad::Tensor w = store.Get("w");
  std::vector<double> curve = {5, 4, 4.5, 3.9, 4.0, 4.1, 4.2, 1.0};
  size_t calls = 0;
  TrainHooks hooks;
  hooks.num_train = 3;
  hooks.train_loss = [&](ad::Tape &tape, size_t, uint64_t) { return tape.Sum(w); };
  hooks.valid_loss = [&]() { return curve[calls++]; };
  TrainConfig cfg;
  cfg.max_epochs = 30;
  cfg.patience = 3;
  auto res = RunTraining(&store, hooks, cfg);
  CHECK(res.early_stopped);
  CHECK(res.epochs.size() == 7);
  CHECK(res.best_epoch == 4);
  CHECK(res.best_valid_loss == 3.9);
  CHECK(res.epochs[0].improved);
  CHECK(!res.epochs[2].improved);
  // The best snapshot is the epoch-4 weights, not the final ones.
  CHECK(res.best.Get("w").Values()[0] != store.Get("w").Values()[0]);

  calls = 0;
  curve = {3, 2, 1};
  cfg.max_epochs = 3;
  auto full = RunTraining(&store, hooks, cfg);
  CHECK(!full.early_stopped);
  CHECK(full.best_epoch == 3);
}

TEST_CASE("training is deterministic for a fixed seed") {
  auto corpus = data::GenerateCorpus(TinySpec(2));
  auto a = TrainStage1(TinyModel(), corpus.train, corpus.valid, FastTrain());
  auto b = TrainStage1(TinyModel(), corpus.train, corpus.valid, FastTrain());
  CHECK(a.best.Checksum() == b.best.Checksum());
  CHECK(a.epochs[1].train_loss == b.epochs[1].train_loss);
  TrainConfig other = FastTrain();
  other.seed = 2;
  auto c = TrainStage1(TinyModel(), corpus.train, corpus.valid, other);
  CHECK(a.best.Checksum() != c.best.Checksum());
}

TEST_CASE("stage-1 training loss decreases") {
  auto corpus = data::GenerateCorpus(TinySpec(2));
  auto r = TrainStage1(TinyModel(), corpus.train, corpus.valid, FastTrain(6));
  CHECK(r.epochs.back().train_loss < r.epochs.front().train_loss);
}

TEST_CASE("pooled set holds every stream of every utterance") {
  auto corpus = data::GenerateCorpus(TinySpec(3));
  auto pooled = PooledBundles(corpus.train);
  CHECK(pooled.size() == 3 * corpus.train.size());
  CHECK(pooled[4].utterance_id == corpus.train[1].id + ".s1");
  auto par = ParallelBundles(corpus.train);
  CHECK(par.size() == corpus.train.size());
  CHECK(par[0].inputs.size() == 3);
}

TEST_CASE("joint model with one stream equals stage 1") {
  auto corpus = data::GenerateCorpus(TinySpec(1));
  auto s1 = TrainStage1(TinyModel(), corpus.train, corpus.valid, FastTrain());
  auto j = TrainJointBaseline(TinyModel(), 1, corpus.train, corpus.valid, FastTrain());
  CHECK(s1.best.Checksum() == j.best.Checksum());
}

TEST_CASE("parameter accounting") {
  model::ModelConfig c = TinyModel();
  auto s1 = model::MemArrayModel::Create(c, 1);
  c.num_streams = 2;
  c.Finalize();
  auto joint = model::MemArrayModel::Create(c, 1);
  CHECK(joint.NumParams(Component::kEncoder) == 2 * s1.NumParams(Component::kEncoder));
  CHECK(joint.NumParams(Component::kFrameAtt) == 2 * s1.NumParams(Component::kFrameAtt));
  CHECK(joint.NumParams(Component::kCtc) == 2 * s1.NumParams(Component::kCtc));
  CHECK(joint.NumParams(Component::kDecoder) == s1.NumParams(Component::kDecoder));
  CHECK(!s1.HasComponent(Component::kHan));
  auto st2 = InitStage2(s1, 2, FreezePlan::Preset("freeze-all"), 1);
  CHECK(st2.NumParams(Component::kHan) == joint.NumParams(Component::kHan));
  CHECK(st2.NumParams() + 2 * s1.NumParams(Component::kEncoder) == joint.NumParams());
}

TEST_CASE("lm training lowers validation perplexity") {
  decode::LmConfig lc;
  lc.vocab_size = 3;
  lc.embed_dim = 3;
  lc.hidden_units = 4;
  std::vector<std::vector<int>> seqs;
  for (int i = 0; i < 12; ++i) seqs.push_back({0, 1, 2, 0, 1, 2});
  auto r = TrainLm(lc, seqs, seqs, FastTrain(8));
  CHECK(r.best_valid_loss < r.epochs[0].valid_loss);
}

}  // namespace train
}  // namespace memarray
