// data/feature-io.cc

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

#include "data/feature-io.h"

#include <cstring>
#include <sstream>

#include "base/binary-io.h"
#include "base/error.h"

namespace memarray {
namespace data {

namespace {
constexpr char kMagic[4] = {'U', 'F', 'E', '1'};
constexpr uint32_t kVersion = 1;
}  // namespace

std::string EncodeFeatures(const FeatureSequence &seq) {
  if (seq.frames.Rows() == 0)
    throw FormatError("write_features", "zero-frame sequence " + seq.utterance_id);
  std::ostringstream os(std::ios::binary);
  os.write(kMagic, 4);
  WriteU32(os, kVersion);
  WriteU32(os, static_cast<uint32_t>(seq.frames.Rows()));
  WriteU32(os, static_cast<uint32_t>(seq.frames.Cols()));
  WriteU8(os, static_cast<uint8_t>(seq.kind));
  WriteString(os, seq.utterance_id);
  WriteU32(os, seq.stream_id);
  WriteF64Array(os, seq.frames.Data());
  return os.str();
}

FeatureSequence DecodeFeatures(const std::string &bytes, const std::string &origin) {
  std::istringstream is(bytes, std::ios::binary);
  BinaryReader r(is, "features " + origin);
  char magic[4];
  r.ReadBytes(magic, 4);
  if (std::memcmp(magic, kMagic, 4) != 0) throw FormatError(r.where(), "bad magic");
  uint32_t version = r.ReadU32();
  if (version != kVersion)
    throw FormatError(r.where(), StrCat("unsupported version ", version));
  uint32_t frames = r.ReadU32();
  uint32_t dim = r.ReadU32();
  if (frames == 0) throw FormatError(r.where(), "zero-frame file");
  if (dim == 0) throw FormatError(r.where(), "zero feature dimension");
  uint8_t kind = r.ReadU8();
  if (kind > 1) throw FormatError(r.where(), StrCat("unknown kind byte ", int(kind)));
  FeatureSequence seq;
  seq.kind = static_cast<FeatureKind>(kind);
  seq.utterance_id = r.ReadString(1u << 16);
  seq.stream_id = r.ReadU32();
  const uint64_t n = static_cast<uint64_t>(frames) * dim;
  if (n * 8 > bytes.size()) throw FormatError(r.where(), "truncated payload");
  std::vector<double> values(n);
  r.ReadF64Array(values);
  if (!r.AtEof()) throw FormatError(r.where(), "trailing bytes");
  seq.frames = Matrix(frames, dim, std::move(values));
  return seq;
}

void WriteFeatures(const std::string &path, const FeatureSequence &seq) {
  AtomicWriteFile(path, EncodeFeatures(seq));
}

FeatureSequence ReadFeatures(const std::string &path) {
  return DecodeFeatures(ReadFileToString(path), path);
}

}  // namespace data
}  // namespace memarray
