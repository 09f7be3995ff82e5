// base/binary-io.h

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

#ifndef MEMARRAY_BASE_BINARY_IO_H_
#define MEMARRAY_BASE_BINARY_IO_H_

#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <span>
#include <string>

#include "base/error.h"

namespace memarray {

// Little-endian scalar codec.  All on-disk formats in this project go through
// these helpers so the byte layout is independent of the host.

inline void WriteU8(std::ostream &os, uint8_t v) {
  os.put(static_cast<char>(v));
}

inline void WriteU32(std::ostream &os, uint32_t v) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  os.write(reinterpret_cast<const char *>(b), 4);
}

inline void WriteU64(std::ostream &os, uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  os.write(reinterpret_cast<const char *>(b), 8);
}

inline void WriteF64(std::ostream &os, double v) {
  WriteU64(os, std::bit_cast<uint64_t>(v));
}

inline void WriteF64Array(std::ostream &os, std::span<const double> values) {
  for (double v : values) WriteF64(os, v);
}

inline void WriteString(std::ostream &os, const std::string &s) {
  WriteU32(os, static_cast<uint32_t>(s.size()));
  os.write(s.data(), static_cast<std::streamsize>(s.size()));
}

// Reader that reports truncation as a FormatError tagged with `where`.
class BinaryReader {
 public:
  BinaryReader(std::istream &is, std::string where)
      : is_(is), where_(std::move(where)) {}

  void ReadBytes(void *dst, size_t n) {
    is_.read(static_cast<char *>(dst), static_cast<std::streamsize>(n));
    if (static_cast<size_t>(is_.gcount()) != n)
      throw FormatError(where_, "truncated payload");
  }
  uint8_t ReadU8() {
    unsigned char b;
    ReadBytes(&b, 1);
    return b;
  }
  uint32_t ReadU32() {
    unsigned char b[4];
    ReadBytes(b, 4);
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(b[i]) << (8 * i);
    return v;
  }
  uint64_t ReadU64() {
    unsigned char b[8];
    ReadBytes(b, 8);
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(b[i]) << (8 * i);
    return v;
  }
  double ReadF64() { return std::bit_cast<double>(ReadU64()); }
  void ReadF64Array(std::span<double> out) {
    for (double &v : out) v = ReadF64();
  }
  std::string ReadString(uint32_t max_len = 1u << 20) {
    uint32_t n = ReadU32();
    if (n > max_len) throw FormatError(where_, "string length out of range");
    std::string s(n, '\0');
    ReadBytes(s.data(), n);
    return s;
  }
  bool AtEof() { return is_.peek() == std::char_traits<char>::eof(); }
  const std::string &where() const { return where_; }

 private:
  std::istream &is_;
  std::string where_;
};

// Writes `contents` to `path` through a temporary file and a rename, so
// readers never observe a partially written file.
void AtomicWriteFile(const std::string &path, const std::string &contents);

std::string ReadFileToString(const std::string &path);

}  // namespace memarray

#endif  // MEMARRAY_BASE_BINARY_IO_H_
