// nn/parameter-store.cc

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

#include "nn/parameter-store.h"

#include <cmath>
#include <cstring>
#include <sstream>

#include "base/binary-io.h"
#include "base/checksum.h"
#include "base/error.h"

namespace memarray {
namespace nn {

namespace {

constexpr char kMagic[4] = {'M', 'C', 'K', '1'};
constexpr uint32_t kVersion = 1;
const char *kNames[kNumComponents] = {"encoder", "frame_att", "han",
                                      "decoder", "ctc",       "lm"};

}  // namespace

const char *ComponentName(Component c) { return kNames[static_cast<int>(c)]; }

std::optional<Component> ParseComponent(const std::string &name) {
  for (int i = 0; i < kNumComponents; ++i)
    if (name == kNames[i]) return static_cast<Component>(i);
  return std::nullopt;
}

ad::Tensor ParameterStore::AddUniform(const std::string &name,
                                      Component component, ad::Shape shape,
                                      size_t fan_in, Rng *rng) {
  const double r = 1.0 / std::sqrt(static_cast<double>(std::max<size_t>(fan_in, 1)));
  std::vector<double> v(ad::NumElements(shape));
  for (double &x : v) x = rng->Uniform(-r, r);
  ad::Tensor t = ad::Tensor::FromValues(std::move(shape), std::move(v));
  Insert(name, component, t);
  return t;
}

ad::Tensor ParameterStore::AddZeros(const std::string &name, Component component,
                                    ad::Shape shape) {
  ad::Tensor t = ad::Tensor::Zeros(std::move(shape));
  Insert(name, component, t);
  return t;
}

void ParameterStore::Insert(const std::string &name, Component component,
                            ad::Tensor tensor) {
  if (Has(name)) throw Error("ParameterStore", "duplicate parameter " + name);
  tensor.SetRequiresGrad(!IsFrozen(component));
  index_[name] = entries_.size();
  entries_.push_back(Entry{name, component, std::move(tensor)});
}

const ParameterStore::Entry &ParameterStore::GetEntry(const std::string &name) const {
  auto it = index_.find(name);
  if (it == index_.end()) throw Error("ParameterStore", "missing parameter " + name);
  return entries_[it->second];
}

const ad::Tensor &ParameterStore::Get(const std::string &name) const {
  return GetEntry(name).tensor;
}

bool ParameterStore::HasComponent(Component c) const {
  for (const Entry &e : entries_)
    if (e.component == c) return true;
  return false;
}

void ParameterStore::SetFrozen(Component c, bool frozen) {
  frozen_[static_cast<int>(c)] = frozen;
  for (Entry &e : entries_)
    if (e.component == c) e.tensor.SetRequiresGrad(!frozen);
}

size_t ParameterStore::NumParams() const {
  size_t n = 0;
  for (const Entry &e : entries_) n += e.tensor.Size();
  return n;
}

size_t ParameterStore::NumParams(Component c) const {
  size_t n = 0;
  for (const Entry &e : entries_)
    if (e.component == c) n += e.tensor.Size();
  return n;
}

size_t ParameterStore::NumTrainable() const {
  size_t n = 0;
  for (const Entry &e : entries_)
    if (e.tensor.RequiresGrad()) n += e.tensor.Size();
  return n;
}

void ParameterStore::ZeroGrad() {
  for (Entry &e : entries_) e.tensor.ZeroGrad();
}

void ParameterStore::CopyValues(const ParameterStore &src,
                                const std::string &src_name,
                                const std::string &dst_name) {
  const ad::Tensor &from = src.Get(src_name);
  ad::Tensor to = Get(dst_name);
  if (from.shape() != to.shape())
    throw ShapeError("ParameterStore::CopyValues",
                     src_name + " " + ad::ShapeString(from.shape()) + " vs " +
                         dst_name + " " + ad::ShapeString(to.shape()));
  auto dst = to.MutableValues();
  std::copy(from.Values().begin(), from.Values().end(), dst.begin());
}

uint64_t ParameterStore::Checksum() const {
  Fnv1a64 h;
  for (const Entry &e : entries_) {
    h.Update(e.name);
    h.Update(e.tensor.Values());
  }
  return h.Digest();
}

uint64_t ParameterStore::Checksum(Component c) const {
  Fnv1a64 h;
  for (const Entry &e : entries_) {
    if (e.component != c) continue;
    h.Update(e.name);
    h.Update(e.tensor.Values());
  }
  return h.Digest();
}

ParameterStore ParameterStore::Clone() const {
  ParameterStore out;
  for (int i = 0; i < kNumComponents; ++i) out.frozen_[i] = frozen_[i];
  for (const Entry &e : entries_) out.Insert(e.name, e.component, e.tensor.DeepCopy());
  out.metadata_ = metadata_;
  return out;
}

// Layout (little endian):
//   "MCK1" u32 version, string metadata, u32 frozen-mask, u32 count,
//   count x { u8 component, string name, u32 rank, rank x u32 extent,
//             extent-product x f64 }
// where string = u32 byte length + bytes.
std::string ParameterStore::Serialize() const {
  std::ostringstream os(std::ios::binary);
  os.write(kMagic, 4);
  WriteU32(os, kVersion);
  WriteString(os, metadata_);
  uint32_t mask = 0;
  for (int i = 0; i < kNumComponents; ++i)
    if (frozen_[i]) mask |= 1u << i;
  WriteU32(os, mask);
  WriteU32(os, static_cast<uint32_t>(entries_.size()));
  for (const Entry &e : entries_) {
    WriteU8(os, static_cast<uint8_t>(e.component));
    WriteString(os, e.name);
    WriteU32(os, static_cast<uint32_t>(e.tensor.Rank()));
    for (size_t d : e.tensor.shape()) WriteU32(os, static_cast<uint32_t>(d));
    WriteF64Array(os, e.tensor.Values());
  }
  return os.str();
}

ParameterStore ParameterStore::Deserialize(const std::string &bytes,
                                           const std::string &origin) {
  std::istringstream is(bytes, std::ios::binary);
  BinaryReader r(is, "checkpoint " + origin);
  char magic[4];
  r.ReadBytes(magic, 4);
  if (std::memcmp(magic, kMagic, 4) != 0)
    throw FormatError(r.where(), "bad magic");
  uint32_t version = r.ReadU32();
  if (version != kVersion)
    throw FormatError(r.where(), StrCat("unsupported version ", version));
  ParameterStore store;
  store.metadata_ = r.ReadString();
  uint32_t mask = r.ReadU32();
  for (int i = 0; i < kNumComponents; ++i) store.frozen_[i] = (mask >> i) & 1u;
  uint32_t count = r.ReadU32();
  for (uint32_t k = 0; k < count; ++k) {
    uint8_t comp = r.ReadU8();
    if (comp >= kNumComponents) throw FormatError(r.where(), "bad component tag");
    std::string name = r.ReadString();
    uint32_t rank = r.ReadU32();
    if (rank > 4) throw FormatError(r.where(), "rank out of range for " + name);
    ad::Shape shape(rank);
    size_t n = 1;
    for (auto &d : shape) {
      d = r.ReadU32();
      n *= d;
    }
    if (n > (1u << 28)) throw FormatError(r.where(), "tensor too large: " + name);
    std::vector<double> v(n);
    r.ReadF64Array(v);
    store.Insert(name, static_cast<Component>(comp),
                 ad::Tensor::FromValues(std::move(shape), std::move(v)));
  }
  if (!r.AtEof()) throw FormatError(r.where(), "trailing bytes");
  return store;
}

void ParameterStore::Save(const std::string &path) const {
  AtomicWriteFile(path, Serialize());
}

ParameterStore ParameterStore::Load(const std::string &path) {
  return Deserialize(ReadFileToString(path), path);
}

}  // namespace nn
}  // namespace memarray
