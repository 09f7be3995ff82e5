// data/vocabulary.cc

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

#include "data/vocabulary.h"

#include "base/error.h"
#include "base/text-utils.h"

namespace memarray {
namespace data {

Vocabulary::Vocabulary(size_t size) : size_(size) {
  if (size < 2 || size > 27) throw ConfigError("Vocabulary", "size must be in [2, 27]");
}

char Vocabulary::Symbol(int id) const {
  if (id < 0 || id >= static_cast<int>(size_))
    throw Error("Vocabulary", StrCat("token id ", id, " out of range"));
  return id == 0 ? ' ' : static_cast<char>('a' + id - 1);
}

std::vector<int> Vocabulary::Encode(const std::string &text) const {
  std::vector<int> out;
  for (char c : NormalizeText(text)) {
    int id = c == ' ' ? 0 : c - 'a' + 1;
    if (id < 0 || id >= static_cast<int>(size_))
      throw Error("Vocabulary", StrCat("symbol '", c, "' not in vocabulary"));
    out.push_back(id);
  }
  return out;
}

std::string Vocabulary::Decode(const std::vector<int> &labels) const {
  std::string s;
  for (int id : labels) s.push_back(Symbol(id));
  return s;
}

}  // namespace data
}  // namespace memarray
