// metrics/score.cc

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

#include "metrics/score.h"

#include <set>
#include <sstream>

#include "base/binary-io.h"
#include "base/error.h"
#include "base/text-utils.h"

namespace memarray {
namespace metrics {

double ErrorCounts::Rate() const {
  if (reference_length == 0) return Errors() == 0 ? 0.0 : static_cast<double>(Errors());
  return static_cast<double>(Errors()) / static_cast<double>(reference_length);
}

ErrorCounts &ErrorCounts::operator+=(const ErrorCounts &o) {
  substitutions += o.substitutions;
  insertions += o.insertions;
  deletions += o.deletions;
  reference_length += o.reference_length;
  return *this;
}

ErrorCounts Align(const std::vector<std::string> &ref, const std::vector<std::string> &hyp) {
  struct Cell {
    size_t cost, indels, s, i, d;
  };
  auto better = [](const Cell &a, const Cell &b) {
    return a.cost != b.cost ? a.cost < b.cost : a.indels < b.indels;
  };
  const size_t R = ref.size(), H = hyp.size();
  std::vector<Cell> prev(H + 1), cur(H + 1);
  for (size_t j = 0; j <= H; ++j) prev[j] = {j, j, 0, j, 0};
  for (size_t r = 1; r <= R; ++r) {
    cur[0] = {r, r, 0, 0, r};
    for (size_t j = 1; j <= H; ++j) {
      const bool match = ref[r - 1] == hyp[j - 1];
      Cell diag = prev[j - 1];
      if (!match) {
        ++diag.cost;
        ++diag.s;
      }
      Cell del = prev[j];
      ++del.cost;
      ++del.indels;
      ++del.d;
      Cell ins = cur[j - 1];
      ++ins.cost;
      ++ins.indels;
      ++ins.i;
      Cell best = diag;
      if (better(del, best)) best = del;
      if (better(ins, best)) best = ins;
      cur[j] = best;
    }
    std::swap(prev, cur);
  }
  const Cell &end = prev[H];
  return {end.s, end.i, end.d, R};
}

std::vector<std::string> Tokenize(const std::string &text, Unit unit) {
  const std::string norm = NormalizeText(text);
  if (unit == Unit::kWord) return SplitWords(norm);
  std::vector<std::string> out;
  for (char c : norm) out.emplace_back(1, c);
  return out;
}

ScoreReport Score(const TextMap &refs, const TextMap &hyps, Unit unit) {
  std::map<std::string, const std::string *> hyp_index;
  for (const auto &[id, text] : hyps)
    if (!hyp_index.emplace(id, &text).second)
      throw Error("score", "duplicate hypothesis utterance id " + id);
  std::set<std::string> seen;
  ScoreReport rep;
  rep.unit = unit;
  for (const auto &[id, text] : refs) {
    if (!seen.insert(id).second) throw Error("score", "duplicate reference utterance id " + id);
    UtteranceScore u;
    u.utterance_id = id;
    auto ref = Tokenize(text, unit);
    auto it = hyp_index.find(id);
    if (it == hyp_index.end()) {
      u.missing = true;
      u.counts = {0, 0, ref.size(), ref.size()};
    } else {
      u.counts = Align(ref, Tokenize(*it->second, unit));
    }
    rep.total += u.counts;
    rep.utterances.push_back(u);
  }
  for (const auto &[id, text] : hyps)
    if (!seen.count(id)) throw Error("score", "hypothesis for unknown utterance " + id);
  return rep;
}

std::string ScoreReport::ToText() const {
  const char *name = unit == Unit::kWord ? "WER" : "CER";
  std::ostringstream os;
  for (const auto &u : utterances)
    os << u.utterance_id << " S=" << u.counts.substitutions << " I=" << u.counts.insertions
       << " D=" << u.counts.deletions << " N=" << u.counts.reference_length
       << (u.missing ? " missing" : "") << '\n';
  os << name << ' ' << FormatDouble(100.0 * Rate()) << " % [ " << total.Errors() << " / "
     << total.reference_length << ", " << total.insertions << " ins, " << total.deletions
     << " del, " << total.substitutions << " sub ]\n";
  return os.str();
}

TextMap ReadTextFile(const std::string &path) {
  std::istringstream in(ReadFileToString(path));
  TextMap out;
  std::string line;
  while (std::getline(in, line)) {
    std::string t = Trim(line);
    if (t.empty()) continue;
    size_t sp = t.find_first_of(" \t");
    if (sp == std::string::npos)
      out.emplace_back(t, "");
    else
      out.emplace_back(t.substr(0, sp), Trim(t.substr(sp + 1)));
  }
  return out;
}

}  // namespace metrics
}  // namespace memarray
