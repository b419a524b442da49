// base/kv-config.h

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

#ifndef GEM_BASE_KV_CONFIG_H_
#define GEM_BASE_KV_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gem {

/// Flat `key = value` configuration.  Blank lines and everything after a '#'
/// are ignored; keys may carry dotted section prefixes ("train.lr").
/// Duplicate keys within one file are rejected.  Typed getters throw
/// ConfigError naming the key on a malformed value.
class KeyValueConfig {
 public:
  KeyValueConfig() = default;

  static KeyValueConfig Parse(std::string_view text,
                              const std::string &source_name = "<string>");

  /// Relative paths found in the file are later resolved against the
  /// directory containing it (see ResolvePath).
  static KeyValueConfig ReadFile(const std::filesystem::path &path);

  /// Inserts or overrides a key (command-line overrides go through here).
  void Set(const std::string &key, const std::string &value);

  bool Has(const std::string &key) const { return values_.count(key) != 0; }

  std::optional<std::string> Get(const std::string &key) const;
  std::string GetString(const std::string &key,
                        const std::string &fallback) const;
  double GetDouble(const std::string &key, double fallback) const;
  std::int64_t GetInt(const std::string &key, std::int64_t fallback) const;
  std::uint64_t GetUint(const std::string &key, std::uint64_t fallback) const;
  bool GetBool(const std::string &key, bool fallback) const;

  /// Comma-separated list with whitespace trimmed and empty items dropped.
  std::vector<std::string> GetList(const std::string &key) const;

  /// Throws ConfigError for the first key not in `known`.  A known entry
  /// ending in '*' matches any key with that prefix.
  void CheckKnownKeys(const std::vector<std::string> &known) const;

  /// Resolves a path value against the config file's directory.
  std::filesystem::path ResolvePath(const std::string &value) const;

  /// "key=value\n" lines in key order; used for hashing run configs.
  std::string Canonical() const;

  const std::map<std::string, std::string> &values() const { return values_; }
  const std::filesystem::path &base_dir() const { return base_dir_; }

 private:
  std::map<std::string, std::string> values_;
  std::filesystem::path base_dir_;
  std::string source_name_ = "<config>";
};

}  // namespace gem

#endif  // GEM_BASE_KV_CONFIG_H_
