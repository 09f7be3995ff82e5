// data/manifest.cc

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

#include "data/manifest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "base/binary-io.h"
#include "base/error.h"
#include "base/text-utils.h"
#include "data/feature-io.h"

namespace memarray {
namespace data {

std::vector<ManifestEntry> ReadManifest(const std::string &path) {
  namespace fs = std::filesystem;
  std::istringstream in(ReadFileToString(path));
  fs::path base = fs::path(path).parent_path();
  std::vector<ManifestEntry> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (Trim(line).empty()) continue;
    auto f = Split(line, '\t');
    if (f.size() != 4 && f.size() != 5)
      throw FormatError("manifest " + path,
                        StrCat("line ", lineno, ": expected 4 or 5 tab-separated fields"));
    ManifestEntry e;
    e.utterance_id = f[0];
    try {
      e.stream_id = static_cast<uint32_t>(std::stoul(f[1]));
      e.frame_count = std::stoul(f[3]);
    } catch (const std::exception &) {
      throw FormatError("manifest " + path, StrCat("line ", lineno, ": bad number"));
    }
    fs::path p(f[2]);
    e.path = p.is_absolute() ? p.string() : (base / p).string();
    if (f.size() == 5) e.transcript = f[4];
    out.push_back(std::move(e));
  }
  return out;
}

void WriteManifest(const std::string &path, const std::vector<ManifestEntry> &entries) {
  std::string out;
  for (const auto &e : entries) {
    out += e.utterance_id + "\t" + std::to_string(e.stream_id) + "\t" + e.path + "\t" +
           std::to_string(e.frame_count);
    if (!e.transcript.empty()) out += "\t" + e.transcript;
    out += "\n";
  }
  AtomicWriteFile(path, out);
}

void VerifyManifest(const std::vector<ManifestEntry> &entries) {
  for (const auto &e : entries) {
    FeatureSequence seq = ReadFeatures(e.path);
    if (seq.frames.Rows() != e.frame_count)
      throw FormatError("manifest", StrCat(e.path, ": frame count ", seq.frames.Rows(),
                                           " but manifest says ", e.frame_count));
    if (seq.utterance_id != e.utterance_id || seq.stream_id != e.stream_id)
      throw FormatError("manifest", e.path + ": ids do not match manifest");
  }
}

}  // namespace data
}  // namespace memarray
