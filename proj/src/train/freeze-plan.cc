// train/freeze-plan.cc

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

#include "train/freeze-plan.h"

#include "base/error.h"
#include "base/text-utils.h"

namespace memarray {
namespace train {

void FreezePlan::Validate() const {
  for (const ComponentPlan *c : {&frame_att, &decoder, &ctc})
    if (!c->from_stage1 && !c->trainable)
      throw ConfigError("FreezePlan", name + ": a randomly initialized component must be trainable");
}

std::vector<std::string> FreezePlan::PresetNames() {
  return {"scratch",        "att-freeze",        "att-dec-freeze",        "att-dec-ctc-freeze",
          "att-finetune",   "att-dec-finetune",  "att-dec-ctc-finetune"};
}

FreezePlan FreezePlan::Preset(const std::string &name_in) {
  const std::string name = name_in == "freeze-all" ? "att-dec-ctc-freeze" : name_in;
  FreezePlan p;
  p.name = name;
  if (name == "scratch") return p;
  const auto parts = Split(name, '-');
  if (parts.size() < 2 || (parts.back() != "freeze" && parts.back() != "finetune"))
    throw ConfigError("FreezePlan", "unknown preset " + name_in);
  const bool trainable = parts.back() == "finetune";
  std::vector<std::string> comps(parts.begin(), parts.end() - 1);
  const std::vector<std::vector<std::string>> allowed = {
      {"att"}, {"att", "dec"}, {"att", "dec", "ctc"}};
  if (std::find(allowed.begin(), allowed.end(), comps) == allowed.end())
    throw ConfigError("FreezePlan", "unknown preset " + name_in);
  for (const std::string &c : comps) {
    ComponentPlan *cp = c == "att" ? &p.frame_att : c == "dec" ? &p.decoder : &p.ctc;
    cp->from_stage1 = true;
    cp->trainable = trainable;
  }
  return p;
}

nn::ParameterStore InitStage2(const nn::ParameterStore &stage1, size_t num_streams,
                              const FreezePlan &plan, uint64_t seed) {
  plan.Validate();
  const model::ModelConfig s1 = model::MemArrayModel::ConfigOf(stage1);
  if (s1.num_streams != 1 || s1.input_mode != model::InputMode::kFeatures)
    throw Error("train_stage2", "stage-1 checkpoint must be a single-stream feature model");
  const model::ModelConfig s2 = model::Stage2Config(s1, num_streams);
  nn::ParameterStore store = model::MemArrayModel::Create(s2, seed);

  auto copy_prefix = [&](const std::string &src, const std::string &dst) {
    size_t copied = 0;
    for (const auto &e : stage1.Entries()) {
      if (e.name.compare(0, src.size() + 1, src + ".") != 0) continue;
      store.CopyValues(stage1, e.name, dst + e.name.substr(src.size()));
      ++copied;
    }
    if (copied == 0) throw Error("train_stage2", "stage-1 checkpoint has no " + src);
  };
  for (size_t i = 0; i < num_streams; ++i) {
    if (plan.frame_att.from_stage1) copy_prefix(model::FrameAttName(0), model::FrameAttName(i));
    if (plan.ctc.from_stage1) copy_prefix(model::CtcName(0), model::CtcName(i));
  }
  if (plan.decoder.from_stage1) copy_prefix(model::kDecoderName, model::kDecoderName);
  store.SetFrozen(nn::Component::kFrameAtt, !plan.frame_att.trainable);
  store.SetFrozen(nn::Component::kDecoder, !plan.decoder.trainable);
  store.SetFrozen(nn::Component::kCtc, !plan.ctc.trainable);
  return store;
}

}  // namespace train
}  // namespace memarray
