// base/checksum.cc

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

#include "base/checksum.h"

#include <cstdio>
#include <fstream>
#include <vector>

#include "base/error.h"

namespace memarray {

std::string HexDigest(uint64_t digest) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(digest));
  return buf;
}

uint64_t FileChecksum(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("FileChecksum", "cannot open " + path);
  Fnv1a64 h;
  std::vector<unsigned char> buf(1 << 16);
  while (in) {
    in.read(reinterpret_cast<char *>(buf.data()),
            static_cast<std::streamsize>(buf.size()));
    h.Update(std::span<const unsigned char>(buf.data(),
                                            static_cast<size_t>(in.gcount())));
  }
  return h.Digest();
}

}  // namespace memarray
