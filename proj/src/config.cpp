// Copyright 2026 The land-sim Authors
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

#include "landsim/config.hpp"

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "landsim/common.hpp"

namespace landsim {
namespace {

std::string Trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string Unquote(const std::string& s) {
  if (s.size() >= 2 && ((s.front() == '"' && s.back() == '"') ||
                        (s.front() == '\'' && s.back() == '\''))) {
    return s.substr(1, s.size() - 2);
  }
  return s;
}

bool ParseNumber(const std::string& s, double* out) {
  if (s.empty()) return false;
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (errno != 0 || end != s.c_str() + s.size()) return false;
  *out = v;
  return true;
}

}  // namespace

ConfigMap ConfigMap::Parse(std::string_view text, const std::string& origin) {
  ConfigMap cfg;
  cfg.origin_ = origin;
  std::string section;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') quoted = !quoted;
      if (line[i] == '#' && !quoted) {
        line.resize(i);
        break;
      }
    }
    line = Trim(line);
    if (line.empty()) continue;
    const std::string where = origin + ":" + std::to_string(line_no);
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw Error(ErrorKind::kConfigError, where + ": unterminated section header");
      }
      section = Trim(std::string_view(line).substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorKind::kConfigError, where + ": expected 'key = value'");
    }
    std::string key = Trim(std::string_view(line).substr(0, eq));
    std::string value = Unquote(Trim(std::string_view(line).substr(eq + 1)));
    if (key.empty()) throw Error(ErrorKind::kConfigError, where + ": empty key");
    if (!section.empty()) key = section + "." + key;
    if (cfg.values_.count(key)) {
      throw Error(ErrorKind::kConfigError, where + ": duplicate key '" + key + "'");
    }
    cfg.values_[key] = value;
  }
  return cfg;
}

ConfigMap ConfigMap::Load(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorKind::kConfigError, "cannot open config file " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return Parse(ss.str(), path);
}

double ConfigMap::GetDouble(const std::string& key, double fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  consumed_[key] = true;
  double v;
  if (!ParseNumber(it->second, &v)) {
    throw Error(ErrorKind::kConfigError,
                origin_ + ": '" + key + "' is not a number: " + it->second);
  }
  return v;
}

std::int64_t ConfigMap::GetInt(const std::string& key, std::int64_t fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  consumed_[key] = true;
  errno = 0;
  char* end = nullptr;
  const long long v = std::strtoll(it->second.c_str(), &end, 10);
  if (it->second.empty() || errno != 0 || end != it->second.c_str() + it->second.size()) {
    throw Error(ErrorKind::kConfigError,
                origin_ + ": '" + key + "' is not an integer: " + it->second);
  }
  return v;
}

std::string ConfigMap::GetString(const std::string& key,
                                 const std::string& fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  consumed_[key] = true;
  return it->second;
}

std::vector<double> ConfigMap::GetDoubleList(
    const std::string& key, const std::vector<double>& fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  consumed_[key] = true;
  try {
    return ParseDoubleList(it->second);
  } catch (const Error& e) {
    throw Error(ErrorKind::kConfigError, origin_ + ": '" + key + "': " + e.what());
  }
}

void ConfigMap::CheckAllConsumed() const {
  std::string unknown;
  for (const auto& [key, value] : values_) {
    if (!consumed_.count(key)) unknown += (unknown.empty() ? "" : ", ") + key;
  }
  if (!unknown.empty()) {
    throw Error(ErrorKind::kConfigError, origin_ + ": unknown keys: " + unknown);
  }
}

std::vector<double> ParseDoubleList(const std::string& text) {
  std::string body = Trim(text);
  if (!body.empty() && body.front() == '[' && body.back() == ']') {
    body = body.substr(1, body.size() - 2);
  }
  std::vector<double> out;
  if (Trim(body).empty()) return out;
  std::stringstream ss(body);
  std::string item;
  while (std::getline(ss, item, ',')) {
    double v;
    if (!ParseNumber(Trim(item), &v)) {
      throw Error(ErrorKind::kConfigError, "bad list element '" + item + "'");
    }
    out.push_back(v);
  }
  return out;
}

std::vector<std::uint64_t> ParseSeedList(const std::string& text) {
  std::vector<std::uint64_t> out;
  for (double v : ParseDoubleList(text)) {
    if (v < 0 || v != static_cast<double>(static_cast<std::uint64_t>(v))) {
      throw Error(ErrorKind::kConfigError, "seeds must be non-negative integers");
    }
    out.push_back(static_cast<std::uint64_t>(v));
  }
  return out;
}

}  // namespace landsim
