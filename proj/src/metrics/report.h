// metrics/report.h

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

#ifndef MEMARRAY_METRICS_REPORT_H_
#define MEMARRAY_METRICS_REPORT_H_

#include <string>
#include <vector>

#include "decode/decode-io.h"
#include "metrics/score.h"

namespace memarray {
namespace metrics {

struct SystemEntry {
  std::string name;
  size_t trainable_params = 0;
  size_t frozen_params = 0;
  // (column label, decode file) pairs.
  std::vector<std::pair<std::string, std::string>> decodes;
};

struct ComparisonRow {
  std::string name;
  size_t trainable_params = 0;
  size_t frozen_params = 0;
  std::vector<double> wer;  // per column, in percent
};

struct ComparisonTable {
  std::vector<std::string> columns;
  std::vector<ComparisonRow> rows;  // declared system order

  std::string ToText() const;
  std::string ToTsv() const;
};

// Scores every system's decode files against `refs`.  Missing artifacts are
// collected and reported together.
ComparisonTable CompareFusion(const std::vector<std::string> &columns,
                              const std::vector<SystemEntry> &systems, const TextMap &refs);

// Reads {"references": path, "columns": [...], "systems": [{"name",
// "trainable_params", "frozen_params", "decodes": {column: path}}]} with
// relative paths resolved against the config file.
ComparisonTable CompareFusionFromJson(const std::string &config_path);

// One row per (utterance, output step): "utt<TAB>step<TAB>b1<TAB>...".
// Throws if a record carries no weights or a row is not a simplex.
std::string BetaTrace(const std::vector<decode::DecodeRecord> &records);

// Stream weights averaged over all steps of all records.
std::vector<double> MeanBeta(const std::vector<decode::DecodeRecord> &records);

}  // namespace metrics
}  // namespace memarray

#endif  // MEMARRAY_METRICS_REPORT_H_
