// base/text-utils.h

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

#ifndef MEMARRAY_BASE_TEXT_UTILS_H_
#define MEMARRAY_BASE_TEXT_UTILS_H_

#include <string>
#include <vector>

namespace memarray {

std::string Trim(const std::string &s);
std::string ToLower(std::string s);
std::vector<std::string> Split(const std::string &s, char delim);
// Splits on runs of whitespace, dropping empty fields.
std::vector<std::string> SplitWords(const std::string &s);
std::string Join(const std::vector<std::string> &parts, const std::string &sep);
// Lowercases and collapses whitespace runs into single spaces.
std::string NormalizeText(const std::string &s);
// Shortest decimal form that parses back to the same double.
std::string FormatDouble(double v);

}  // namespace memarray

#endif  // MEMARRAY_BASE_TEXT_UTILS_H_
