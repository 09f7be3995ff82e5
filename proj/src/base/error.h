// base/error.h

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

#ifndef MEMARRAY_BASE_ERROR_H_
#define MEMARRAY_BASE_ERROR_H_

#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

namespace memarray {

/// Base class for every error raised by the library.  The `where` field names
/// the operation that failed so callers can report it without parsing text.
class Error : public std::runtime_error {
 public:
  Error(std::string where, const std::string &what)
      : std::runtime_error(where + ": " + what), where_(std::move(where)) {}
  const std::string &where() const { return where_; }

 private:
  std::string where_;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

template <typename... Args>
std::string StrCat(Args &&...args) {
  std::ostringstream os;
  (os << ... << std::forward<Args>(args));
  return os.str();
}

}  // namespace memarray

#define MEMARRAY_CHECK(cond, where, msg)                           \
  do {                                                             \
    if (!(cond)) throw ::memarray::Error((where), (msg));          \
  } while (0)

#endif  // MEMARRAY_BASE_ERROR_H_
