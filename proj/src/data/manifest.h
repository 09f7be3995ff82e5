// data/manifest.h

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

#ifndef MEMARRAY_DATA_MANIFEST_H_
#define MEMARRAY_DATA_MANIFEST_H_

#include <cstdint>
#include <string>
#include <vector>

namespace memarray {
namespace data {

// One line per (utterance, stream), tab separated:
//   utterance_id  stream_id  path  frame_count  [transcript]
// Relative paths are resolved against the manifest's directory.
struct ManifestEntry {
  std::string utterance_id;
  uint32_t stream_id = 0;
  std::string path;
  size_t frame_count = 0;
  std::string transcript;
};

std::vector<ManifestEntry> ReadManifest(const std::string &path);
void WriteManifest(const std::string &path, const std::vector<ManifestEntry> &entries);

// Checks that every entry resolves to a readable feature file whose frame
// count matches; throws on the first mismatch.
void VerifyManifest(const std::vector<ManifestEntry> &entries);

}  // namespace data
}  // namespace memarray

#endif  // MEMARRAY_DATA_MANIFEST_H_
