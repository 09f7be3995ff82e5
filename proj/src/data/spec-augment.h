// data/spec-augment.h

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

#ifndef MEMARRAY_DATA_SPEC_AUGMENT_H_
#define MEMARRAY_DATA_SPEC_AUGMENT_H_

#include <cstdint>
#include <vector>

#include "base/config-map.h"
#include "base/matrix.h"
#include "base/random.h"

namespace memarray {
namespace data {

// Time and feature masking.  Widths are drawn uniformly from [0, max].
struct AugmentPolicy {
  size_t max_time_mask_width = 5;
  size_t time_mask_count = 2;
  size_t max_feature_mask_width = 2;
  size_t feature_mask_count = 1;

  bool IsNoop() const {
    return (time_mask_count == 0 || max_time_mask_width == 0) &&
           (feature_mask_count == 0 || max_feature_mask_width == 0);
  }
  static AugmentPolicy FromConfig(const ConfigMap &cfg, const std::string &prefix);
};

struct Mask {
  bool time = true;  // false: feature-axis mask
  size_t start = 0;
  size_t width = 0;
};

// Fraction of the T x D cells covered by the union of the masks.
double MaskedFraction(const std::vector<Mask> &masks, size_t T, size_t D);

// Draws masks inside the sequence bounds, dropping trailing masks until the
// masked fraction is at most one half.  Throws if a maximum width exceeds the
// sequence.
std::vector<Mask> SampleMasks(const AugmentPolicy &policy, size_t T, size_t D,
                              Rng *rng);

// Zeroes the masked regions; everything else is copied unchanged.
Matrix ApplyMasks(const Matrix &x, const std::vector<Mask> &masks);

Matrix SpecAugment(const Matrix &x, const AugmentPolicy &policy, uint64_t seed);

}  // namespace data
}  // namespace memarray

#endif  // MEMARRAY_DATA_SPEC_AUGMENT_H_
