// decode/decode-io.h

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

#ifndef MEMARRAY_DECODE_DECODE_IO_H_
#define MEMARRAY_DECODE_DECODE_IO_H_

#include <string>
#include <vector>

namespace memarray {
namespace decode {

// One decoded utterance.  File layout, one record per line, tab separated:
//   utterance_id  text  joint  att  ctc  lm  beta
// where beta lists the per-step stream weights as "b1,b2;b1,b2;..." or "-"
// when no diagnostics were kept.
struct DecodeRecord {
  std::string utterance_id;
  std::string text;
  double joint = 0.0;
  double att = 0.0;
  double ctc = 0.0;
  double lm = 0.0;
  std::vector<std::vector<double>> beta;
};

std::string FormatDecodeRecord(const DecodeRecord &r);
DecodeRecord ParseDecodeRecord(const std::string &line, const std::string &where);

void WriteDecodeFile(const std::string &path, const std::vector<DecodeRecord> &records);
std::vector<DecodeRecord> ReadDecodeFile(const std::string &path);

}  // namespace decode
}  // namespace memarray

#endif  // MEMARRAY_DECODE_DECODE_IO_H_
