// decode/corpus-decode.h

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

#ifndef MEMARRAY_DECODE_CORPUS_DECODE_H_
#define MEMARRAY_DECODE_CORPUS_DECODE_H_

#include <vector>

#include "decode/beam-search.h"
#include "decode/decode-io.h"
#include "model/model.h"

namespace memarray {
namespace decode {

// Decodes every bundle and keeps the top hypothesis with its stream-weight
// trace.  An utterance without any ended hypothesis decodes to empty text.
std::vector<DecodeRecord> DecodeBundles(const model::MemArrayModel &model,
                                        const std::vector<model::StreamBundle> &bundles,
                                        const BeamConfig &cfg, const RnnLm *lm = nullptr,
                                        SimplexStats *stats = nullptr);

// Reference transcripts (id, text) rebuilt from bundle labels.
std::vector<std::pair<std::string, std::string>> References(
    const std::vector<model::StreamBundle> &bundles, size_t vocab_size);

// (id, text) pairs of decode records.
std::vector<std::pair<std::string, std::string>> Hypotheses(
    const std::vector<DecodeRecord> &records);

}  // namespace decode
}  // namespace memarray

#endif  // MEMARRAY_DECODE_CORPUS_DECODE_H_
