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

#include "ganlab/config.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

#include "ganlab/format.hpp"

namespace ganlab {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

template <class T>
std::string join(const std::vector<T>& values) {
  std::string s;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) s += ",";
    if constexpr (std::is_floating_point_v<T>) {
      s += format_double(values[i]);
    } else {
      s += std::to_string(values[i]);
    }
  }
  return s;
}

}  // namespace

ConfigError::ConfigError(std::string field, const std::string& message)
    : UsageError("config field '" + field + "': " + message), field_(std::move(field)) {}

Config Config::parse(std::string_view text) {
  Config cfg;
  std::istringstream in{std::string(text)};
  std::string line;
  std::string section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    if (body.front() == '[') {
      if (body.back() != ']') {
        throw ConfigError("line " + std::to_string(line_no), "unterminated section header");
      }
      section = trim(std::string_view(body).substr(1, body.size() - 2));
      continue;
    }
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no), "expected 'key = value'");
    }
    std::string key = trim(std::string_view(body).substr(0, eq));
    if (key.empty()) throw ConfigError("line " + std::to_string(line_no), "empty key");
    if (!section.empty()) key = section + "." + key;
    if (cfg.values_.contains(key)) throw ConfigError(key, "given twice");
    cfg.values_[key] = trim(std::string_view(body).substr(eq + 1));
  }
  return cfg;
}

Config Config::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), "cannot open config file");
  std::stringstream buffer;
  buffer << in.rdbuf();
  if (path.extension() != ".json") return parse(buffer.str());
  Config cfg;
  nlohmann::json manifest;
  try {
    manifest = nlohmann::json::parse(buffer.str());
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path.string(), std::string("invalid JSON: ") + e.what());
  }
  if (!manifest.contains("config") || !manifest["config"].is_object()) {
    throw ConfigError("config", "manifest has no config object");
  }
  for (const auto& [key, value] : manifest["config"].items()) {
    if (!value.is_string()) throw ConfigError(key, "manifest values must be strings");
    cfg.values_[key] = value.get<std::string>();
  }
  return cfg;
}

void Config::set(const std::string& key, const std::string& value) { values_[key] = value; }

bool Config::contains(const std::string& key) const { return values_.contains(key); }

const std::string* Config::lookup(const std::string& key) {
  used_.insert(key);
  const auto it = values_.find(key);
  return it == values_.end() ? nullptr : &it->second;
}

void Config::record(const std::string& key, const std::string& canonical, bool defaulted,
                    DefaultOrigin origin) {
  resolved_[key] = canonical;
  if (defaulted) {
    defaulted_[key] = origin;
  } else {
    defaulted_.erase(key);
  }
}

std::string Config::get_string(const std::string& key, const std::string& fallback,
                               DefaultOrigin origin) {
  const std::string* v = lookup(key);
  const std::string value = v ? *v : fallback;
  record(key, value, v == nullptr, origin);
  return value;
}

double Config::get_double(const std::string& key, double fallback, DefaultOrigin origin) {
  const std::string* v = lookup(key);
  double value = fallback;
  if (v) {
    try {
      value = parse_double(*v);
    } catch (const UsageError&) {
      throw ConfigError(key, "expected a number, got '" + *v + "'");
    }
  }
  record(key, format_double(value), v == nullptr, origin);
  return value;
}

std::int64_t Config::get_int(const std::string& key, std::int64_t fallback,
                             DefaultOrigin origin) {
  const std::string* v = lookup(key);
  std::int64_t value = fallback;
  if (v) {
    std::size_t used = 0;
    try {
      value = std::stoll(*v, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != v->size() || v->empty()) {
      throw ConfigError(key, "expected an integer, got '" + *v + "'");
    }
  }
  record(key, std::to_string(value), v == nullptr, origin);
  return value;
}

std::uint64_t Config::get_u64(const std::string& key, std::uint64_t fallback,
                              DefaultOrigin origin) {
  const std::string* v = lookup(key);
  std::uint64_t value = fallback;
  if (v) {
    std::size_t used = 0;
    try {
      if (!v->empty() && v->front() == '-') throw std::invalid_argument("negative");
      value = std::stoull(*v, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != v->size() || v->empty()) {
      throw ConfigError(key, "expected a nonnegative integer, got '" + *v + "'");
    }
  }
  record(key, std::to_string(value), v == nullptr, origin);
  return value;
}

bool Config::get_bool(const std::string& key, bool fallback, DefaultOrigin origin) {
  const std::string* v = lookup(key);
  bool value = fallback;
  if (v) {
    if (*v == "true" || *v == "1" || *v == "yes" || *v == "on") {
      value = true;
    } else if (*v == "false" || *v == "0" || *v == "no" || *v == "off") {
      value = false;
    } else {
      throw ConfigError(key, "expected true/false, got '" + *v + "'");
    }
  }
  record(key, value ? "true" : "false", v == nullptr, origin);
  return value;
}

std::vector<double> Config::get_doubles(const std::string& key,
                                        const std::vector<double>& fallback,
                                        DefaultOrigin origin) {
  const std::string* v = lookup(key);
  std::vector<double> value = fallback;
  if (v) {
    value.clear();
    for (const auto& item : split_list(*v)) {
      try {
        value.push_back(parse_double(item));
      } catch (const UsageError&) {
        throw ConfigError(key, "expected a comma-separated list of numbers");
      }
    }
  }
  record(key, join(value), v == nullptr, origin);
  return value;
}

std::vector<int> Config::get_ints(const std::string& key, const std::vector<int>& fallback,
                                  DefaultOrigin origin) {
  const std::string* v = lookup(key);
  std::vector<int> value = fallback;
  if (v) {
    value.clear();
    for (const auto& item : split_list(*v)) {
      std::size_t used = 0;
      int parsed = 0;
      try {
        parsed = std::stoi(item, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != item.size()) {
        throw ConfigError(key, "expected a comma-separated list of integers");
      }
      value.push_back(parsed);
    }
  }
  record(key, join(value), v == nullptr, origin);
  return value;
}

void Config::check_all_used() const {
  for (const auto& [key, value] : values_) {
    if (!used_.contains(key)) throw ConfigError(key, "unknown key for this experiment");
  }
}

}  // namespace ganlab
