// base/checksum.h

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

#ifndef MEMARRAY_BASE_CHECKSUM_H_
#define MEMARRAY_BASE_CHECKSUM_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

namespace memarray {

// 64-bit FNV-1a, used for reproducibility and freeze checks.
class Fnv1a64 {
 public:
  void Update(std::span<const unsigned char> bytes) {
    for (unsigned char b : bytes) {
      hash_ ^= b;
      hash_ *= 0x100000001b3ULL;
    }
  }
  void Update(std::string_view s) {
    Update(std::span<const unsigned char>(
        reinterpret_cast<const unsigned char *>(s.data()), s.size()));
  }
  void Update(std::span<const double> values) {
    Update(std::span<const unsigned char>(
        reinterpret_cast<const unsigned char *>(values.data()),
        values.size() * sizeof(double)));
  }
  uint64_t Digest() const { return hash_; }

 private:
  uint64_t hash_ = 0xcbf29ce484222325ULL;
};

std::string HexDigest(uint64_t digest);
uint64_t FileChecksum(const std::string &path);

}  // namespace memarray

#endif  // MEMARRAY_BASE_CHECKSUM_H_
