// metrics/report.cc

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

#include "metrics/report.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "base/binary-io.h"
#include "base/error.h"
#include "base/text-utils.h"
#include "json.hpp"

namespace memarray {
namespace metrics {

namespace {

std::string Percent(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

}  // namespace

ComparisonTable CompareFusion(const std::vector<std::string> &columns,
                              const std::vector<SystemEntry> &systems, const TextMap &refs) {
  std::vector<std::string> missing;
  for (const auto &s : systems)
    for (const auto &col : columns) {
      auto it = std::find_if(s.decodes.begin(), s.decodes.end(),
                             [&](const auto &d) { return d.first == col; });
      if (it == s.decodes.end())
        missing.push_back(s.name + "/" + col + " (no decode file given)");
      else if (!std::filesystem::exists(it->second))
        missing.push_back(s.name + "/" + col + " (" + it->second + ")");
    }
  if (!missing.empty()) throw Error("compare_fusion", "missing artifacts: " + Join(missing, ", "));
  ComparisonTable t;
  t.columns = columns;
  for (const auto &s : systems) {
    ComparisonRow row{s.name, s.trainable_params, s.frozen_params, {}};
    for (const auto &col : columns) {
      const auto &path = std::find_if(s.decodes.begin(), s.decodes.end(),
                                      [&](const auto &d) { return d.first == col; })
                             ->second;
      TextMap hyps;
      for (const auto &r : decode::ReadDecodeFile(path)) hyps.emplace_back(r.utterance_id, r.text);
      row.wer.push_back(100.0 * Score(refs, hyps, Unit::kWord).Rate());
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

ComparisonTable CompareFusionFromJson(const std::string &config_path) {
  namespace fs = std::filesystem;
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(ReadFileToString(config_path));
  } catch (const nlohmann::json::exception &e) {
    throw FormatError(config_path, e.what());
  }
  const fs::path base = fs::path(config_path).parent_path();
  auto resolve = [&](const std::string &p) {
    return fs::path(p).is_absolute() ? p : (base / p).string();
  };
  try {
    std::vector<std::string> columns = j.at("columns").get<std::vector<std::string>>();
    std::vector<SystemEntry> systems;
    for (const auto &s : j.at("systems")) {
      SystemEntry e;
      e.name = s.at("name").get<std::string>();
      e.trainable_params = s.value("trainable_params", size_t{0});
      e.frozen_params = s.value("frozen_params", size_t{0});
      for (const auto &[col, path] : s.at("decodes").items())
        e.decodes.emplace_back(col, resolve(path.get<std::string>()));
      systems.push_back(std::move(e));
    }
    return CompareFusion(columns, systems,
                         ReadTextFile(resolve(j.at("references").get<std::string>())));
  } catch (const nlohmann::json::exception &e) {
    throw FormatError(config_path, e.what());
  }
}

std::string ComparisonTable::ToText() const {
  std::vector<std::vector<std::string>> cells;
  std::vector<std::string> head{"system", "trainable", "frozen"};
  for (const auto &c : columns) head.push_back("WER " + c);
  cells.push_back(head);
  for (const auto &r : rows) {
    std::vector<std::string> line{r.name, std::to_string(r.trainable_params),
                                  std::to_string(r.frozen_params)};
    for (double w : r.wer) line.push_back(Percent(w));
    cells.push_back(line);
  }
  std::vector<size_t> width(head.size(), 0);
  for (const auto &line : cells)
    for (size_t i = 0; i < line.size(); ++i) width[i] = std::max(width[i], line[i].size());
  std::string out;
  for (const auto &line : cells) {
    for (size_t i = 0; i < line.size(); ++i) {
      std::string cell = line[i];
      if (i == 0)
        cell.append(width[i] - cell.size(), ' ');
      else
        cell.insert(0, width[i] - cell.size(), ' ');
      out += (i ? "  " : "") + cell;
    }
    out += '\n';
  }
  return out;
}

std::string ComparisonTable::ToTsv() const {
  std::string out = "system\ttrainable_params\tfrozen_params";
  for (const auto &c : columns) out += "\twer_" + c;
  out += '\n';
  for (const auto &r : rows) {
    out += r.name + '\t' + std::to_string(r.trainable_params) + '\t' +
           std::to_string(r.frozen_params);
    for (double w : r.wer) out += '\t' + FormatDouble(w);
    out += '\n';
  }
  return out;
}

std::string BetaTrace(const std::vector<decode::DecodeRecord> &records) {
  std::string out;
  for (const auto &r : records) {
    if (r.beta.empty()) throw Error("beta_trace", r.utterance_id + ": no stream weights recorded");
    for (size_t l = 0; l < r.beta.size(); ++l) {
      double sum = 0.0;
      bool negative = false;
      for (double b : r.beta[l]) sum += b, negative = negative || b < 0.0;
      if (negative || std::abs(sum - 1.0) > 1e-9)
        throw Error("beta_trace", StrCat(r.utterance_id, " step ", l, ": not a simplex (sum ", sum, ")"));
      out += r.utterance_id + '\t' + std::to_string(l);
      for (double b : r.beta[l]) out += '\t' + FormatDouble(b);
      out += '\n';
    }
  }
  return out;
}

std::vector<double> MeanBeta(const std::vector<decode::DecodeRecord> &records) {
  std::vector<double> sum;
  size_t steps = 0;
  for (const auto &r : records)
    for (const auto &b : r.beta) {
      if (sum.empty()) sum.assign(b.size(), 0.0);
      if (b.size() != sum.size()) throw Error("beta_trace", "stream count changes between steps");
      for (size_t i = 0; i < b.size(); ++i) sum[i] += b[i];
      ++steps;
    }
  if (steps == 0) throw Error("beta_trace", "no stream weights recorded");
  for (double &s : sum) s /= static_cast<double>(steps);
  return sum;
}

}  // namespace metrics
}  // namespace memarray
