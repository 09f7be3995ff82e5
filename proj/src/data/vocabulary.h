// data/vocabulary.h

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

#ifndef MEMARRAY_DATA_VOCABULARY_H_
#define MEMARRAY_DATA_VOCABULARY_H_

#include <string>
#include <vector>

namespace memarray {
namespace data {

// Character vocabulary U: id 0 is the word boundary (written as a space),
// ids 1..size-1 are the letters 'a', 'b', ...
class Vocabulary {
 public:
  explicit Vocabulary(size_t size);

  size_t Size() const { return size_; }
  char Symbol(int id) const;
  std::vector<int> Encode(const std::string &text) const;
  std::string Decode(const std::vector<int> &labels) const;

 private:
  size_t size_;
};

}  // namespace data
}  // namespace memarray

#endif  // MEMARRAY_DATA_VOCABULARY_H_
