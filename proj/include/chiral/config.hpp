// Copyright 2026 The chiralsim Authors
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

// config.hpp: flat key/value run parameters.
//
// Text form, one entry per line:
//
//   # Rabi frequencies in MHz
//   omega.1 = 0.2
//   alpha.1 = pi/2
//
// A JSON object with the same keys, or a run record whose "config" member
// holds them, is accepted as well.

#pragma once

#include <map>
#include <stdexcept>
#include <string>

namespace chiral {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& source, int line, int column, const std::string& what);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

// Values are kept as text and converted on access.
class ParamMap {
 public:
  ParamMap() = default;

  bool has(const std::string& key) const { return values_.count(key) > 0; }
  void set(const std::string& key, const std::string& value) { values_[key] = value; }
  void set(const std::string& key, double value);
  const std::string& text(const std::string& key) const;
  double number(const std::string& key) const;
  bool flag(const std::string& key) const;
  const std::map<std::string, std::string>& entries() const { return values_; }

  // Applies `other` on top of this map. Keys absent here raise ParseError
  // unless allow_new is set.
  void merge(const ParamMap& other, const std::string& source, bool allow_new = false);

 private:
  std::map<std::string, std::string> values_;
};

// Parses a number, also accepting multiples and fractions of pi such as
// "pi/2", "-pi/2" or "0.5*pi". Throws std::invalid_argument.
double parse_number(const std::string& text);

// `source` names the input in diagnostics.
ParamMap parse_params(const std::string& text, const std::string& source);
ParamMap load_params(const std::string& path);
// Parses one "key=value" override.
ParamMap parse_override(const std::string& assignment);

// Scenario stored in a run record, or empty when the input is not a record.
std::string record_scenario(const std::string& path);

}  // namespace chiral
