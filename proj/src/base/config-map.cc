// base/config-map.cc

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

#include "base/config-map.h"

#include <charconv>
#include <sstream>

#include "base/binary-io.h"
#include "base/error.h"
#include "base/text-utils.h"

namespace memarray {

ConfigMap ConfigMap::Parse(const std::string &text, const std::string &origin) {
  ConfigMap cfg;
  cfg.origin_ = origin;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = Trim(line);
    if (t.empty() || t[0] == '#') continue;
    size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError(origin, StrCat("line ", lineno, ": expected key=value"));
    std::string key = Trim(t.substr(0, eq));
    if (key.empty())
      throw ConfigError(origin, StrCat("line ", lineno, ": empty key"));
    cfg.values_[key] = Trim(t.substr(eq + 1));
  }
  return cfg;
}

ConfigMap ConfigMap::FromFile(const std::string &path) {
  return Parse(ReadFileToString(path), path);
}

void ConfigMap::Set(const std::string &key, const std::string &value) {
  values_[key] = value;
}

const std::string *ConfigMap::Find(const std::string &key) const {
  auto it = values_.find(key);
  if (it == values_.end()) return nullptr;
  used_.insert(key);
  return &it->second;
}

std::string ConfigMap::GetString(const std::string &key,
                                 const std::string &def) const {
  const std::string *v = Find(key);
  return v ? *v : def;
}

double ConfigMap::GetDouble(const std::string &key, double def) const {
  const std::string *v = Find(key);
  if (!v) return def;
  try {
    size_t pos = 0;
    double d = std::stod(*v, &pos);
    if (pos != v->size()) throw std::invalid_argument(*v);
    return d;
  } catch (const std::exception &) {
    throw ConfigError(origin_, "key " + key + ": not a number: " + *v);
  }
}

int64_t ConfigMap::GetInt(const std::string &key, int64_t def) const {
  const std::string *v = Find(key);
  if (!v) return def;
  int64_t out = 0;
  auto [p, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
  if (ec != std::errc() || p != v->data() + v->size())
    throw ConfigError(origin_, "key " + key + ": not an integer: " + *v);
  return out;
}

uint64_t ConfigMap::GetU64(const std::string &key, uint64_t def) const {
  const std::string *v = Find(key);
  if (!v) return def;
  uint64_t out = 0;
  auto [p, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
  if (ec != std::errc() || p != v->data() + v->size())
    throw ConfigError(origin_, "key " + key + ": not an unsigned integer: " + *v);
  return out;
}

bool ConfigMap::GetBool(const std::string &key, bool def) const {
  const std::string *v = Find(key);
  if (!v) return def;
  std::string s = ToLower(*v);
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw ConfigError(origin_, "key " + key + ": not a boolean: " + *v);
}

std::vector<double> ConfigMap::GetDoubleList(
    const std::string &key, const std::vector<double> &def) const {
  const std::string *v = Find(key);
  if (!v) return def;
  std::vector<double> out;
  for (const std::string &tok : Split(*v, ',')) {
    std::string t = Trim(tok);
    if (t.empty()) continue;
    try {
      out.push_back(std::stod(t));
    } catch (const std::exception &) {
      throw ConfigError(origin_, "key " + key + ": bad list element: " + t);
    }
  }
  return out;
}

void ConfigMap::CheckAllUsed() const {
  std::string unknown;
  for (const auto &[k, v] : values_) {
    if (!used_.count(k)) unknown += (unknown.empty() ? "" : ", ") + k;
  }
  if (!unknown.empty()) throw ConfigError(origin_, "unknown keys: " + unknown);
}

void ConfigMap::Merge(const ConfigMap &other) {
  for (const auto &[k, v] : other.values_) values_[k] = v;
}

std::string ConfigMap::ToString() const {
  std::string out;
  for (const auto &[k, v] : values_) out += k + "=" + v + "\n";
  return out;
}

}  // namespace memarray
