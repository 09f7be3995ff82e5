// nn/parameter-store.h

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

#ifndef MEMARRAY_NN_PARAMETER_STORE_H_
#define MEMARRAY_NN_PARAMETER_STORE_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "autodiff/tensor.h"
#include "base/random.h"

namespace memarray {
namespace nn {

// Model component a parameter belongs to; freezing works per component.
enum class Component : uint8_t {
  kEncoder = 0,
  kFrameAtt = 1,
  kHan = 2,
  kDecoder = 3,
  kCtc = 4,
  kLm = 5,
};
constexpr int kNumComponents = 6;

const char *ComponentName(Component c);
std::optional<Component> ParseComponent(const std::string &name);

// Named, component-tagged parameter tensors plus a per-component freeze mask.
// Frozen tensors have requires_grad off, so the tape never produces
// gradients for them and the optimizer leaves them untouched.
class ParameterStore {
 public:
  struct Entry {
    std::string name;
    Component component;
    ad::Tensor tensor;
  };

  // Registers a tensor initialized uniformly in [-1/sqrt(fan_in), +1/sqrt(fan_in)].
  ad::Tensor AddUniform(const std::string &name, Component component,
                        ad::Shape shape, size_t fan_in, Rng *rng);
  ad::Tensor AddZeros(const std::string &name, Component component,
                      ad::Shape shape);
  void Insert(const std::string &name, Component component, ad::Tensor tensor);

  bool Has(const std::string &name) const { return index_.count(name) > 0; }
  const ad::Tensor &Get(const std::string &name) const;
  const Entry &GetEntry(const std::string &name) const;
  const std::vector<Entry> &Entries() const { return entries_; }
  bool HasComponent(Component c) const;

  void SetFrozen(Component c, bool frozen);
  bool IsFrozen(Component c) const { return frozen_[static_cast<int>(c)]; }

  size_t NumParams() const;
  size_t NumParams(Component c) const;
  size_t NumTrainable() const;

  void ZeroGrad();

  // Copies the values of `src_name` in `src` into `dst_name` here; shapes must
  // agree.
  void CopyValues(const ParameterStore &src, const std::string &src_name,
                  const std::string &dst_name);

  // Checksum over names, shapes and value bytes, optionally restricted.
  uint64_t Checksum() const;
  uint64_t Checksum(Component c) const;

  ParameterStore Clone() const;

  // Free-form key=value text stored with a checkpoint (model configuration).
  const std::string &Metadata() const { return metadata_; }
  void SetMetadata(std::string m) { metadata_ = std::move(m); }

  std::string Serialize() const;
  static ParameterStore Deserialize(const std::string &bytes,
                                    const std::string &origin);
  void Save(const std::string &path) const;
  static ParameterStore Load(const std::string &path);

 private:
  std::vector<Entry> entries_;
  std::map<std::string, size_t> index_;
  bool frozen_[kNumComponents] = {false, false, false, false, false, false};
  std::string metadata_;
};

}  // namespace nn
}  // namespace memarray

#endif  // MEMARRAY_NN_PARAMETER_STORE_H_
