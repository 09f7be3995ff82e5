// decode/decode-io.cc

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

#include "decode/decode-io.h"

#include <charconv>
#include <sstream>

#include "base/binary-io.h"
#include "base/error.h"
#include "base/text-utils.h"

namespace memarray {
namespace decode {

namespace {

double ParseNumber(const std::string &s, const std::string &where) {
  double v = 0.0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw FormatError(where, "bad number '" + s + "'");
  return v;
}

}  // namespace

std::string FormatDecodeRecord(const DecodeRecord &r) {
  if (r.utterance_id.find_first_of("\t\n") != std::string::npos ||
      r.text.find_first_of("\t\n") != std::string::npos)
    throw FormatError("decode record", "tab or newline inside a field");
  std::string beta;
  for (size_t l = 0; l < r.beta.size(); ++l) {
    if (l) beta += ';';
    for (size_t i = 0; i < r.beta[l].size(); ++i) {
      if (i) beta += ',';
      beta += FormatDouble(r.beta[l][i]);
    }
  }
  if (beta.empty()) beta = "-";
  return r.utterance_id + '\t' + r.text + '\t' + FormatDouble(r.joint) + '\t' +
         FormatDouble(r.att) + '\t' + FormatDouble(r.ctc) + '\t' + FormatDouble(r.lm) +
         '\t' + beta;
}

DecodeRecord ParseDecodeRecord(const std::string &line, const std::string &where) {
  auto f = Split(line, '\t');
  if (f.size() != 7) throw FormatError(where, StrCat("expected 7 fields, got ", f.size()));
  DecodeRecord r;
  r.utterance_id = f[0];
  r.text = f[1];
  r.joint = ParseNumber(f[2], where);
  r.att = ParseNumber(f[3], where);
  r.ctc = ParseNumber(f[4], where);
  r.lm = ParseNumber(f[5], where);
  if (f[6] != "-")
    for (const std::string &step : Split(f[6], ';')) {
      std::vector<double> b;
      for (const std::string &x : Split(step, ',')) b.push_back(ParseNumber(x, where));
      r.beta.push_back(std::move(b));
    }
  return r;
}

void WriteDecodeFile(const std::string &path, const std::vector<DecodeRecord> &records) {
  std::string out;
  for (const auto &r : records) out += FormatDecodeRecord(r) + '\n';
  AtomicWriteFile(path, out);
}

std::vector<DecodeRecord> ReadDecodeFile(const std::string &path) {
  std::istringstream in(ReadFileToString(path));
  std::vector<DecodeRecord> out;
  std::string line;
  size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (Trim(line).empty()) continue;
    out.push_back(ParseDecodeRecord(line, StrCat(path, ":", n)));
  }
  return out;
}

}  // namespace decode
}  // namespace memarray
