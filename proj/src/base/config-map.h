// base/config-map.h

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

#ifndef MEMARRAY_BASE_CONFIG_MAP_H_
#define MEMARRAY_BASE_CONFIG_MAP_H_

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace memarray {

// Flat key=value configuration.  Blank lines and lines starting with '#' are
// ignored.  Getters record which keys were consumed so that callers can
// reject typos with CheckAllUsed().
class ConfigMap {
 public:
  ConfigMap() = default;

  static ConfigMap Parse(const std::string &text, const std::string &origin);
  static ConfigMap FromFile(const std::string &path);

  void Set(const std::string &key, const std::string &value);
  bool Has(const std::string &key) const { return values_.count(key) > 0; }

  std::string GetString(const std::string &key, const std::string &def) const;
  double GetDouble(const std::string &key, double def) const;
  int64_t GetInt(const std::string &key, int64_t def) const;
  uint64_t GetU64(const std::string &key, uint64_t def) const;
  bool GetBool(const std::string &key, bool def) const;
  std::vector<double> GetDoubleList(const std::string &key,
                                    const std::vector<double> &def) const;

  // Throws ConfigError listing every key that no getter has touched.
  void CheckAllUsed() const;

  // Merges `other` into this map; keys in `other` win.
  void Merge(const ConfigMap &other);

  // Serializes in key order, one "key=value" per line.
  std::string ToString() const;
  const std::map<std::string, std::string> &Values() const { return values_; }

 private:
  const std::string *Find(const std::string &key) const;

  std::map<std::string, std::string> values_;
  mutable std::set<std::string> used_;
  std::string origin_ = "<config>";
};

}  // namespace memarray

#endif  // MEMARRAY_BASE_CONFIG_MAP_H_
