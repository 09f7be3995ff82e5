// data/spec-augment.cc

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

#include "data/spec-augment.h"

#include "base/error.h"

namespace memarray {
namespace data {

AugmentPolicy AugmentPolicy::FromConfig(const ConfigMap &cfg, const std::string &prefix) {
  AugmentPolicy p;
  p.max_time_mask_width =
      static_cast<size_t>(cfg.GetInt(prefix + "max_time_mask_width", p.max_time_mask_width));
  p.time_mask_count =
      static_cast<size_t>(cfg.GetInt(prefix + "time_mask_count", p.time_mask_count));
  p.max_feature_mask_width = static_cast<size_t>(
      cfg.GetInt(prefix + "max_feature_mask_width", p.max_feature_mask_width));
  p.feature_mask_count =
      static_cast<size_t>(cfg.GetInt(prefix + "feature_mask_count", p.feature_mask_count));
  return p;
}

double MaskedFraction(const std::vector<Mask> &masks, size_t T, size_t D) {
  if (T == 0 || D == 0) return 0.0;
  std::vector<bool> tm(T, false), fm(D, false);
  for (const Mask &m : masks) {
    auto &v = m.time ? tm : fm;
    for (size_t i = m.start; i < m.start + m.width && i < v.size(); ++i) v[i] = true;
  }
  size_t nt = 0, nf = 0;
  for (bool b : tm) nt += b;
  for (bool b : fm) nf += b;
  // |time rows| * D + |feature cols| * T - overlap.
  double cells = static_cast<double>(nt * D + nf * T - nt * nf);
  return cells / static_cast<double>(T * D);
}

std::vector<Mask> SampleMasks(const AugmentPolicy &policy, size_t T, size_t D,
                              Rng *rng) {
  if (policy.time_mask_count > 0 && policy.max_time_mask_width > T)
    throw Error("spec_augment", StrCat("time mask width ", policy.max_time_mask_width,
                                       " wider than sequence of ", T, " frames"));
  if (policy.feature_mask_count > 0 && policy.max_feature_mask_width > D)
    throw Error("spec_augment", StrCat("feature mask width ", policy.max_feature_mask_width,
                                       " wider than feature dim ", D));
  std::vector<Mask> masks;
  auto draw = [&](bool time, size_t count, size_t max_w, size_t extent) {
    for (size_t i = 0; i < count; ++i) {
      Mask m;
      m.time = time;
      m.width = static_cast<size_t>(rng->UniformInt(0, static_cast<int64_t>(max_w)));
      m.start = static_cast<size_t>(rng->UniformInt(0, static_cast<int64_t>(extent - m.width)));
      masks.push_back(m);
    }
  };
  draw(true, policy.time_mask_count, policy.max_time_mask_width, T);
  draw(false, policy.feature_mask_count, policy.max_feature_mask_width, D);
  while (!masks.empty() && MaskedFraction(masks, T, D) > 0.5) masks.pop_back();
  return masks;
}

Matrix ApplyMasks(const Matrix &x, const std::vector<Mask> &masks) {
  Matrix y = x;
  for (const Mask &m : masks) {
    const size_t extent = m.time ? x.Rows() : x.Cols();
    if (m.start + m.width > extent)
      throw Error("spec_augment", "mask outside sequence bounds");
    for (size_t i = m.start; i < m.start + m.width; ++i) {
      if (m.time) {
        for (size_t d = 0; d < x.Cols(); ++d) y(i, d) = 0.0;
      } else {
        for (size_t t = 0; t < x.Rows(); ++t) y(t, i) = 0.0;
      }
    }
  }
  return y;
}

Matrix SpecAugment(const Matrix &x, const AugmentPolicy &policy, uint64_t seed) {
  Rng rng(seed);
  return ApplyMasks(x, SampleMasks(policy, x.Rows(), x.Cols(), &rng));
}

}  // namespace data
}  // namespace memarray
