// metrics/score.h

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

#ifndef MEMARRAY_METRICS_SCORE_H_
#define MEMARRAY_METRICS_SCORE_H_

#include <map>
#include <string>
#include <vector>

namespace memarray {
namespace metrics {

enum class Unit { kWord, kChar };

struct ErrorCounts {
  size_t substitutions = 0;
  size_t insertions = 0;
  size_t deletions = 0;
  size_t reference_length = 0;

  size_t Errors() const { return substitutions + insertions + deletions; }
  double Rate() const;
  ErrorCounts &operator+=(const ErrorCounts &o);
  bool operator==(const ErrorCounts &o) const = default;
};

// Levenshtein alignment with unit costs.  Among minimum-cost alignments the
// one with the fewest insertions plus deletions is taken, so swapping the
// arguments swaps I and D and keeps S.
ErrorCounts Align(const std::vector<std::string> &ref, const std::vector<std::string> &hyp);

// Normalized text split into scoring units.  Characters include the word
// boundary (space) between words.
std::vector<std::string> Tokenize(const std::string &text, Unit unit);

struct UtteranceScore {
  std::string utterance_id;
  ErrorCounts counts;
  bool missing = false;  // no hypothesis given
};

struct ScoreReport {
  Unit unit = Unit::kWord;
  std::vector<UtteranceScore> utterances;  // in reference order
  ErrorCounts total;

  double Rate() const { return total.Rate(); }
  std::string ToText() const;
};

using TextMap = std::vector<std::pair<std::string, std::string>>;

// Scores hypotheses against references matched by utterance id.
ScoreReport Score(const TextMap &refs, const TextMap &hyps, Unit unit);

// "id text" lines (first whitespace separates the id).
TextMap ReadTextFile(const std::string &path);

}  // namespace metrics
}  // namespace memarray

#endif  // MEMARRAY_METRICS_SCORE_H_
