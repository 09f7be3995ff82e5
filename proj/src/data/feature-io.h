// data/feature-io.h

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

#ifndef MEMARRAY_DATA_FEATURE_IO_H_
#define MEMARRAY_DATA_FEATURE_IO_H_

#include <cstdint>
#include <string>

#include "base/matrix.h"

namespace memarray {
namespace data {

enum class FeatureKind : uint8_t { kRaw = 0, kUfe = 1 };

// T x D frames of one stream of one utterance.  The same type carries raw
// acoustic-like features and encoder outputs (UFE features).
struct FeatureSequence {
  FeatureKind kind = FeatureKind::kRaw;
  std::string utterance_id;
  uint32_t stream_id = 0;
  Matrix frames;
};

// Container layout, little endian:
//   magic "UFE1", u32 version (=1), u32 frame_count, u32 dim, u8 kind,
//   u32 id_length, id_length bytes of UTF-8 utterance id, u32 stream_id,
//   frame_count * dim f64 values, row-major.
std::string EncodeFeatures(const FeatureSequence &seq);
FeatureSequence DecodeFeatures(const std::string &bytes, const std::string &origin);

void WriteFeatures(const std::string &path, const FeatureSequence &seq);
FeatureSequence ReadFeatures(const std::string &path);

}  // namespace data
}  // namespace memarray

#endif  // MEMARRAY_DATA_FEATURE_IO_H_
