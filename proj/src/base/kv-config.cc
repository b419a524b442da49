// base/kv-config.cc

// Copyright 2026  The gemspoof Authors

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

#include "base/kv-config.h"

#include "base/gem-common.h"
#include "base/text-utils.h"

namespace gem {

namespace fs = std::filesystem;
using internal::StrCat;

KeyValueConfig KeyValueConfig::Parse(std::string_view text,
                                     const std::string &source_name) {
  KeyValueConfig cfg;
  cfg.source_name_ = source_name;
  std::vector<std::string> lines = SplitString(text, '\n');
  for (size_t i = 0; i < lines.size(); ++i) {
    std::string_view line = lines[i];
    if (size_t hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = Trim(line);
    if (line.empty()) continue;
    size_t eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError(StrCat(source_name, ":", i + 1,
                               ": expected 'key = value', got '", line, "'"));
    std::string key(Trim(line.substr(0, eq)));
    std::string value(Trim(line.substr(eq + 1)));
    if (key.empty())
      throw ConfigError(StrCat(source_name, ":", i + 1, ": empty key"));
    if (cfg.values_.count(key))
      throw ConfigError(
          StrCat(source_name, ":", i + 1, ": duplicate key '", key, "'"));
    cfg.values_[key] = value;
  }
  return cfg;
}

KeyValueConfig KeyValueConfig::ReadFile(const fs::path &path) {
  if (!fs::exists(path))
    throw ConfigError(StrCat("config file not found: ", path.string()));
  KeyValueConfig cfg = Parse(ReadFileToString(path), path.string());
  cfg.base_dir_ = path.parent_path();
  return cfg;
}

void KeyValueConfig::Set(const std::string &key, const std::string &value) {
  values_[key] = value;
}

std::optional<std::string> KeyValueConfig::Get(const std::string &key) const {
  auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

std::string KeyValueConfig::GetString(const std::string &key,
                                      const std::string &fallback) const {
  return Get(key).value_or(fallback);
}

double KeyValueConfig::GetDouble(const std::string &key,
                                 double fallback) const {
  auto v = Get(key);
  if (!v) return fallback;
  auto d = ParseFiniteDouble(*v);
  if (!d)
    throw ConfigError(
        StrCat(source_name_, ": key '", key, "' expects a real, got '", *v, "'"));
  return *d;
}

std::int64_t KeyValueConfig::GetInt(const std::string &key,
                                    std::int64_t fallback) const {
  auto v = Get(key);
  if (!v) return fallback;
  auto d = ParseInt(*v);
  if (!d)
    throw ConfigError(StrCat(source_name_, ": key '", key,
                             "' expects an integer, got '", *v, "'"));
  return *d;
}

std::uint64_t KeyValueConfig::GetUint(const std::string &key,
                                      std::uint64_t fallback) const {
  auto v = Get(key);
  if (!v) return fallback;
  auto d = ParseUint(*v);
  if (!d)
    throw ConfigError(StrCat(source_name_, ": key '", key,
                             "' expects an unsigned integer, got '", *v, "'"));
  return *d;
}

bool KeyValueConfig::GetBool(const std::string &key, bool fallback) const {
  auto v = Get(key);
  if (!v) return fallback;
  std::string s = ToLower(*v);
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw ConfigError(StrCat(source_name_, ": key '", key,
                           "' expects a boolean, got '", *v, "'"));
}

std::vector<std::string> KeyValueConfig::GetList(const std::string &key) const {
  std::vector<std::string> out;
  auto v = Get(key);
  if (!v) return out;
  for (const std::string &item : SplitString(*v, ',')) {
    std::string_view t = Trim(item);
    if (!t.empty()) out.emplace_back(t);
  }
  return out;
}

void KeyValueConfig::CheckKnownKeys(const std::vector<std::string> &known) const {
  for (const auto &[key, value] : values_) {
    bool ok = false;
    for (const std::string &k : known) {
      if (!k.empty() && k.back() == '*') {
        if (key.compare(0, k.size() - 1, k, 0, k.size() - 1) == 0) ok = true;
      } else if (k == key) {
        ok = true;
      }
      if (ok) break;
    }
    if (!ok)
      throw ConfigError(StrCat(source_name_, ": unknown key '", key, "'"));
  }
}

fs::path KeyValueConfig::ResolvePath(const std::string &value) const {
  fs::path p(value);
  if (p.is_absolute() || base_dir_.empty()) return p;
  return base_dir_ / p;
}

std::string KeyValueConfig::Canonical() const {
  std::string out;
  for (const auto &[key, value] : values_) out += key + "=" + value + "\n";
  return out;
}

}  // namespace gem
