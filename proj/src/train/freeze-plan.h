// train/freeze-plan.h

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

#ifndef MEMARRAY_TRAIN_FREEZE_PLAN_H_
#define MEMARRAY_TRAIN_FREEZE_PLAN_H_

#include <string>
#include <vector>

#include "model/model.h"
#include "nn/parameter-store.h"

namespace memarray {
namespace train {

struct ComponentPlan {
  bool from_stage1 = false;
  bool trainable = true;
};

// Stage-2 initialization and freezing per component.  The stream attention
// is always randomly initialized and trained.
struct FreezePlan {
  std::string name = "scratch";
  ComponentPlan frame_att;
  ComponentPlan decoder;
  ComponentPlan ctc;

  void Validate() const;
  // scratch, att-freeze, att-dec-freeze, att-dec-ctc-freeze (alias
  // freeze-all), and the matching *-finetune variants.
  static FreezePlan Preset(const std::string &name);
  static std::vector<std::string> PresetNames();
};

// Builds a Stage-2 store with `num_streams` UFE streams.  Components marked
// from_stage1 copy the single-stream modules (frame_att.0, ctc.0, dec) of
// `stage1` into every stream; non-trainable components are frozen.
nn::ParameterStore InitStage2(const nn::ParameterStore &stage1, size_t num_streams,
                              const FreezePlan &plan, uint64_t seed);

}  // namespace train
}  // namespace memarray

#endif  // MEMARRAY_TRAIN_FREEZE_PLAN_H_
