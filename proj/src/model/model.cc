// model/model.cc

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

#include "model/model.h"

#include <cmath>

#include "base/error.h"
#include "base/random.h"
#include "ctc/ctc-loss.h"

namespace memarray {
namespace model {

const char *InputModeName(InputMode m) {
  return m == InputMode::kUfe ? "ufe" : "features";
}

InputMode ParseInputMode(const std::string &s) {
  if (s == "features") return InputMode::kFeatures;
  if (s == "ufe") return InputMode::kUfe;
  throw ConfigError("ModelConfig", "unknown input mode " + s);
}

ModelConfig::ModelConfig() {
  frame_attention.type = nn::AttentionType::kLocation;
  frame_attention.attention_dim = 64;
  stream_attention.type = nn::AttentionType::kContent;
  stream_attention.attention_dim = 32;
  Finalize();
}

size_t ModelConfig::MemoryDim() const {
  return input_mode == InputMode::kUfe ? ufe_dim : encoder.OutputDim();
}

void ModelConfig::Finalize() {
  decoder.context_dim = MemoryDim();
  Validate();
}

void ModelConfig::Validate() const {
  if (num_streams == 0) throw ConfigError("ModelConfig", "num_streams must be >= 1");
  if (decoder.vocab_size < 2) throw ConfigError("ModelConfig", "vocab_size must be >= 2");
  if (decoder.context_dim != MemoryDim())
    throw ConfigError("ModelConfig", StrCat("decoder context dim ", decoder.context_dim,
                                            " != memory dim ", MemoryDim()));
  if (input_mode == InputMode::kFeatures) encoder.Validate();
}

std::string ModelConfig::ToString() const {
  ConfigMap c;
  c.Set("model.num_streams", std::to_string(num_streams));
  c.Set("model.input_mode", InputModeName(input_mode));
  c.Set("model.ufe_dim", std::to_string(ufe_dim));
  encoder.ToConfig("model.encoder.", &c);
  frame_attention.ToConfig("model.frame_att.", &c);
  stream_attention.ToConfig("model.han.", &c);
  c.Set("model.vocab_size", std::to_string(decoder.vocab_size));
  c.Set("model.decoder.embed_dim", std::to_string(decoder.embed_dim));
  c.Set("model.decoder.hidden_units", std::to_string(decoder.hidden_units));
  return c.ToString();
}

ModelConfig ModelConfig::FromConfig(const ConfigMap &cfg) {
  ModelConfig m;
  m.num_streams = static_cast<size_t>(cfg.GetInt("model.num_streams", 1));
  m.input_mode = ParseInputMode(cfg.GetString("model.input_mode", "features"));
  m.encoder = nn::EncoderConfig::FromConfig(cfg, "model.encoder.");
  m.ufe_dim = static_cast<size_t>(cfg.GetInt("model.ufe_dim", m.encoder.OutputDim()));
  m.frame_attention =
      nn::AttentionConfig::FromConfig(cfg, "model.frame_att.", m.frame_attention);
  m.stream_attention = nn::AttentionConfig::FromConfig(cfg, "model.han.", m.stream_attention);
  m.decoder.vocab_size = static_cast<size_t>(cfg.GetInt("model.vocab_size", 8));
  m.decoder.embed_dim = static_cast<size_t>(cfg.GetInt("model.decoder.embed_dim", 32));
  m.decoder.hidden_units = static_cast<size_t>(cfg.GetInt("model.decoder.hidden_units", 64));
  m.Finalize();
  return m;
}

ModelConfig ModelConfig::FromString(const std::string &text, const std::string &origin) {
  return FromConfig(ConfigMap::Parse(text, origin));
}

ModelConfig Stage2Config(const ModelConfig &stage1, size_t num_streams) {
  ModelConfig m = stage1;
  m.num_streams = num_streams;
  m.input_mode = InputMode::kUfe;
  m.ufe_dim = stage1.MemoryDim();
  m.Finalize();
  return m;
}

std::string EncoderName(size_t i) { return "enc." + std::to_string(i); }
std::string FrameAttName(size_t i) { return "frame_att." + std::to_string(i); }
std::string CtcName(size_t i) { return "ctc." + std::to_string(i); }

std::vector<double> UnigramDistribution(const std::vector<std::vector<int>> &labels,
                                        size_t vocab_size) {
  std::vector<double> counts(vocab_size + 1, 0.0);
  double total = 0.0;
  for (const auto &seq : labels) {
    for (int c : seq) {
      if (c < 0 || static_cast<size_t>(c) >= vocab_size)
        throw Error("unigram", StrCat("label ", c, " out of range"));
      counts[c] += 1.0;
    }
    counts[vocab_size] += 1.0;
    total += static_cast<double>(seq.size()) + 1.0;
  }
  if (total == 0.0) throw Error("unigram", "no labels");
  for (double &c : counts) c /= total;
  return counts;
}

ad::Tensor AttentionXent(ad::Tape &tape, const std::vector<ad::Tensor> &log_probs,
                         const std::vector<int> &targets, double smoothing,
                         const std::vector<double> &unigram) {
  if (log_probs.size() != targets.size())
    throw Error("attention_xent", StrCat(log_probs.size(), " distributions for ",
                                         targets.size(), " targets"));
  if (targets.empty()) throw Error("attention_xent", "empty target");
  const size_t V = log_probs[0].Cols();
  std::vector<double> prior = unigram;
  if (prior.empty()) prior.assign(V, 1.0 / static_cast<double>(V));
  if (prior.size() != V)
    throw Error("attention_xent", StrCat("unigram size ", prior.size(), " != ", V));
  std::vector<double> q(targets.size() * V);
  for (size_t l = 0; l < targets.size(); ++l) {
    if (targets[l] < 0 || static_cast<size_t>(targets[l]) >= V)
      throw Error("attention_xent", StrCat("target ", targets[l], " out of range"));
    for (size_t c = 0; c < V; ++c) q[l * V + c] = smoothing * prior[c];
    q[l * V + targets[l]] += 1.0 - smoothing;
  }
  ad::Tensor lp = tape.Concat(log_probs, 0);
  ad::Tensor Q = ad::Tensor::FromValues({targets.size(), V}, std::move(q));
  return tape.Scale(tape.Sum(tape.Mul(Q, lp)), -1.0);
}

void MemArrayModel::Register(nn::ParameterStore *store, const ModelConfig &cfg, Rng *rng) {
  cfg.Validate();
  const size_t d = cfg.MemoryDim();
  const size_t H = cfg.decoder.hidden_units;
  const size_t V = cfg.VocabSize() + 1;
  for (size_t i = 0; i < cfg.num_streams; ++i) {
    if (cfg.input_mode == InputMode::kFeatures)
      nn::Encoder::Register(store, EncoderName(i), cfg.encoder, rng);
    nn::Attention::Register(store, FrameAttName(i), nn::Component::kFrameAtt, d, H,
                            cfg.frame_attention, rng);
    nn::Linear::Register(store, CtcName(i), nn::Component::kCtc, d, V, rng);
  }
  if (cfg.num_streams > 1)
    nn::Attention::Register(store, kHanName, nn::Component::kHan, d, H,
                            cfg.stream_attention, rng);
  nn::Decoder::Register(store, kDecoderName, cfg.decoder, rng);
}

nn::ParameterStore MemArrayModel::Create(const ModelConfig &cfg, uint64_t seed) {
  nn::ParameterStore store;
  Rng rng(seed);
  Register(&store, cfg, &rng);
  store.SetMetadata(cfg.ToString());
  return store;
}

ModelConfig MemArrayModel::ConfigOf(const nn::ParameterStore &store) {
  if (store.Metadata().empty())
    throw FormatError("checkpoint", "no model configuration in checkpoint metadata");
  return ModelConfig::FromString(store.Metadata(), "checkpoint metadata");
}

MemArrayModel::MemArrayModel(const nn::ParameterStore &store)
    : MemArrayModel(store, ConfigOf(store)) {}

MemArrayModel::MemArrayModel(const nn::ParameterStore &store, const ModelConfig &cfg)
    : cfg_(cfg), decoder_(store, kDecoderName, cfg.decoder) {
  cfg_.Validate();
  for (size_t i = 0; i < cfg_.num_streams; ++i) {
    if (cfg_.input_mode == InputMode::kFeatures) {
      if (!store.Has(EncoderName(i) + ".conv0.weight"))
        throw Error("model", "missing encoder parameters for stream " + std::to_string(i));
      encoders_.emplace_back(store, EncoderName(i), cfg_.encoder);
    }
    frame_att_.emplace_back(store, FrameAttName(i), cfg_.frame_attention);
    ctc_.emplace_back(store, CtcName(i));
  }
  if (cfg_.num_streams > 1) han_.emplace_back(store, kHanName, cfg_.stream_attention);
}

void MemArrayModel::CheckBundle(const StreamBundle &b) const {
  if (b.mode != cfg_.input_mode)
    throw Error("forward_mtl", StrCat(b.utterance_id, ": bundle holds ", InputModeName(b.mode),
                                      " inputs but the model expects ",
                                      InputModeName(cfg_.input_mode)));
  if (b.inputs.size() != cfg_.num_streams)
    throw Error("forward_mtl", StrCat(b.utterance_id, ": ", b.inputs.size(),
                                      " streams, model has ", cfg_.num_streams));
  const size_t dim =
      cfg_.input_mode == InputMode::kUfe ? cfg_.ufe_dim : cfg_.encoder.input_dim;
  for (const Matrix &m : b.inputs) {
    if (m.Rows() == 0) throw Error("forward_mtl", b.utterance_id + ": empty input");
    if (m.Cols() != dim)
      throw ShapeError("forward_mtl", StrCat(b.utterance_id, ": input dim ", m.Cols(),
                                             " != ", dim));
  }
}

MemArrayModel::Encoded MemArrayModel::Encode(ad::Tape &tape, const StreamBundle &b) const {
  CheckBundle(b);
  Encoded enc;
  for (size_t i = 0; i < cfg_.num_streams; ++i) {
    ad::Tensor x = ad::Tensor::FromMatrix(b.inputs[i]);
    ad::Tensor h = encoders_.empty() ? x : encoders_[i].Forward(tape, x);
    enc.memories.push_back(frame_att_[i].Prepare(tape, h));
    enc.ctc_log_posteriors.push_back(tape.LogSoftmax(ctc_[i].Forward(tape, h), 1));
  }
  return enc;
}

MemArrayModel::State MemArrayModel::InitialState(const Encoded &enc) const {
  State s;
  s.decoder = decoder_.InitialState();
  for (const auto &m : enc.memories)
    s.frame_weights.push_back(ad::Tensor::Zeros({m.values.Rows(), 1}));
  s.beta = ad::Tensor::Zeros({cfg_.num_streams, 1});
  return s;
}

MemArrayModel::StepResult MemArrayModel::Step(ad::Tape &tape, const Encoded &enc,
                                              const State &state, int prev_token) const {
  StepResult r;
  std::vector<ad::Tensor> contexts;
  for (size_t i = 0; i < cfg_.num_streams; ++i) {
    auto a = frame_att_[i].Step(tape, enc.memories[i], state.decoder.h,
                                state.frame_weights[i], "frame_attention");
    r.state.frame_weights.push_back(a.weights);
    contexts.push_back(a.context);
  }
  auto fused = nn::HanFuse(tape, contexts, state.decoder.h, state.beta,
                           han_.empty() ? nullptr : &han_[0]);
  r.state.beta = fused.weights;
  auto out = decoder_.Step(tape, fused.fused, prev_token, state.decoder);
  r.state.decoder = out.state;
  r.log_probs = out.log_probs;
  return r;
}

MtlResult MemArrayModel::ForwardMtl(ad::Tape &tape, const StreamBundle &b,
                                    const MtlConfig &mtl, bool diagnostics) const {
  if (mtl.lambda < 0.0 || mtl.lambda > 1.0)
    throw ConfigError("MtlConfig", StrCat("lambda ", mtl.lambda, " outside [0, 1]"));
  Encoded enc = Encode(tape, b);
  MtlResult res;

  std::vector<ad::Tensor> ctc_losses;
  for (const auto &lp : enc.ctc_log_posteriors)
    ctc_losses.push_back(ctc::CtcLoss(tape, lp, b.labels));
  ad::Tensor ctc_loss = ctc::MultiStreamCtc(tape, ctc_losses);

  std::vector<int> targets = b.labels;
  targets.push_back(cfg_.decoder.EosId());
  std::vector<ad::Tensor> dists;
  State state = InitialState(enc);
  int prev = cfg_.decoder.SosId();
  for (int tok : targets) {
    StepResult s = Step(tape, enc, state, prev);
    state = s.state;
    dists.push_back(s.log_probs);
    if (diagnostics) {
      auto bv = state.beta.Values();
      res.beta.emplace_back(bv.begin(), bv.end());
      std::vector<std::vector<double>> fw;
      for (const auto &w : state.frame_weights) fw.emplace_back(w.Values().begin(), w.Values().end());
      res.frame_weights.push_back(std::move(fw));
    }
    prev = tok;
  }
  ad::Tensor att_loss =
      AttentionXent(tape, dists, targets, mtl.label_smoothing, mtl.unigram);
  res.ctc_loss = ctc_loss.Item();
  res.att_loss = att_loss.Item();
  res.loss = tape.Add(tape.Scale(ctc_loss, mtl.lambda), tape.Scale(att_loss, 1.0 - mtl.lambda));
  return res;
}

data::FeatureSequence ExtractUfe(const nn::ParameterStore &store,
                                 const data::FeatureSequence &x, size_t encoder_index) {
  ModelConfig cfg = MemArrayModel::ConfigOf(store);
  const std::string prefix = EncoderName(encoder_index);
  if (cfg.input_mode != InputMode::kFeatures || !store.Has(prefix + ".conv0.weight"))
    throw Error("extract_ufe", "checkpoint has no encoder parameters " + prefix);
  nn::Encoder enc(store, prefix, cfg.encoder);
  ad::Tape tape(false);
  data::FeatureSequence out;
  out.kind = data::FeatureKind::kUfe;
  out.utterance_id = x.utterance_id;
  out.stream_id = x.stream_id;
  out.frames = enc.Forward(tape, ad::Tensor::FromMatrix(x.frames)).ToMatrix();
  return out;
}

}  // namespace model
}  // namespace memarray
