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

#ifndef LANDSIM_CONFIG_HPP_
#define LANDSIM_CONFIG_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace landsim {

// Flat `key = value` text with optional `[section]` headers; a header
// prefixes the keys that follow it ("[camera]" + "f = 300" -> "camera.f").
// `#` starts a comment. Values are kept as trimmed strings with surrounding
// quotes removed.
class ConfigMap {
 public:
  static ConfigMap Parse(std::string_view text, const std::string& origin = "<text>");
  static ConfigMap Load(const std::string& path);

  bool Has(const std::string& key) const { return values_.count(key) != 0; }
  void Set(const std::string& key, const std::string& value) { values_[key] = value; }

  // Typed accessors; a missing key yields the fallback, a malformed value
  // throws kConfigError naming the key.
  double GetDouble(const std::string& key, double fallback) const;
  std::int64_t GetInt(const std::string& key, std::int64_t fallback) const;
  std::string GetString(const std::string& key, const std::string& fallback) const;
  std::vector<double> GetDoubleList(const std::string& key,
                                    const std::vector<double>& fallback) const;

  // Throws kConfigError listing every key that was never read.
  void CheckAllConsumed() const;

  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
  std::string origin_;
  mutable std::map<std::string, bool> consumed_;
};

std::vector<double> ParseDoubleList(const std::string& text);
std::vector<std::uint64_t> ParseSeedList(const std::string& text);

}  // namespace landsim

#endif  // LANDSIM_CONFIG_HPP_
