// Copyright 2026 The ganlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ganlab/error.hpp"

namespace ganlab {

/// A config problem tied to one field.
class ConfigError : public UsageError {
 public:
  ConfigError(std::string field, const std::string& message);
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Where a default value comes from; reported in run manifests so readers
/// can tell reproduced values from implementation choices.
enum class DefaultOrigin { paper, implementation };

/// Flat `key = value` configuration with optional `[section]` headers that
/// prefix the keys below them ("[train]" + "n_critic" -> "train.n_critic").
/// '#' starts a comment.
///
/// Every getter records the value actually used, so `resolved()` lists the
/// complete configuration of a run, defaults included.
class Config {
 public:
  Config() = default;

  static Config parse(std::string_view text);
  /// Reads a key = value file, or the "config" object of a JSON manifest
  /// when the path ends in ".json".
  static Config load(const std::filesystem::path& path);

  void set(const std::string& key, const std::string& value);
  bool contains(const std::string& key) const;

  std::string get_string(const std::string& key, const std::string& fallback,
                         DefaultOrigin origin = DefaultOrigin::implementation);
  double get_double(const std::string& key, double fallback,
                    DefaultOrigin origin = DefaultOrigin::implementation);
  std::int64_t get_int(const std::string& key, std::int64_t fallback,
                       DefaultOrigin origin = DefaultOrigin::implementation);
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback,
                        DefaultOrigin origin = DefaultOrigin::implementation);
  bool get_bool(const std::string& key, bool fallback,
                DefaultOrigin origin = DefaultOrigin::implementation);
  std::vector<double> get_doubles(const std::string& key, const std::vector<double>& fallback,
                                  DefaultOrigin origin = DefaultOrigin::implementation);
  std::vector<int> get_ints(const std::string& key, const std::vector<int>& fallback,
                            DefaultOrigin origin = DefaultOrigin::implementation);

  /// Throws ConfigError naming the first key no getter asked for.
  void check_all_used() const;

  const std::map<std::string, std::string>& resolved() const noexcept { return resolved_; }
  /// Keys that fell back to a default, with the default's origin.
  const std::map<std::string, DefaultOrigin>& defaulted() const noexcept { return defaulted_; }

 private:
  const std::string* lookup(const std::string& key);
  void record(const std::string& key, const std::string& canonical, bool defaulted,
              DefaultOrigin origin);

  std::map<std::string, std::string> values_;
  std::set<std::string> used_;
  std::map<std::string, std::string> resolved_;
  std::map<std::string, DefaultOrigin> defaulted_;
};

}  // namespace ganlab
