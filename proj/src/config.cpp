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

#include "chiral/config.hpp"

#include "chiral/hilbert.hpp"

#include <json.hpp>

#include <cctype>
#include <fstream>
#include <regex>
#include <sstream>

namespace chiral {

namespace {

std::string trim(const std::string& s, std::size_t* lead = nullptr) {
  std::size_t b = 0;
  while (b < s.size() && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  std::size_t e = s.size();
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  if (lead) *lead = b;
  return s.substr(b, e - b);
}

std::string format_number(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

bool valid_key(const std::string& key) {
  static const std::regex re("[A-Za-z_][A-Za-z0-9_.]*");
  return std::regex_match(key, re);
}

ParamMap from_json(const nlohmann::json& obj, const std::string& source) {
  ParamMap out;
  if (!obj.is_object()) throw ParseError(source, 1, 1, "expected a JSON object");
  for (const auto& [key, value] : obj.items()) {
    if (value.is_number()) {
      out.set(key, value.get<double>());
    } else if (value.is_boolean()) {
      out.set(key, value.get<bool>() ? "true" : "false");
    } else if (value.is_string()) {
      out.set(key, value.get<std::string>());
    } else {
      throw ParseError(source, 1, 1, "value of '" + key + "' must be a number or string");
    }
  }
  return out;
}

}  // namespace

ParseError::ParseError(const std::string& source, int line, int column, const std::string& what)
    : std::runtime_error(source + ":" + std::to_string(line) + ":" + std::to_string(column) +
                         ": " + what),
      line_(line),
      column_(column) {}

void ParamMap::set(const std::string& key, double value) { values_[key] = format_number(value); }

const std::string& ParamMap::text(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw std::out_of_range("missing parameter '" + key + "'");
  return it->second;
}

double ParamMap::number(const std::string& key) const {
  const std::string& t = text(key);
  try {
    return parse_number(t);
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("parameter '" + key + "' is not a number: '" + t + "'");
  }
}

bool ParamMap::flag(const std::string& key) const {
  const std::string& t = text(key);
  if (t == "true" || t == "yes" || t == "on") return true;
  if (t == "false" || t == "no" || t == "off") return false;
  return number(key) != 0.0;
}

void ParamMap::merge(const ParamMap& other, const std::string& source, bool allow_new) {
  for (const auto& [key, value] : other.values_) {
    if (!allow_new && !has(key)) {
      throw ParseError(source, 1, 1, "unknown parameter '" + key + "'");
    }
    values_[key] = value;
  }
}

double parse_number(const std::string& raw) {
  const std::string text = trim(raw);
  if (text.empty()) throw std::invalid_argument("empty number");
  std::size_t used = 0;
  try {
    const double v = std::stod(text, &used);
    if (used == text.size()) return v;
  } catch (const std::out_of_range&) {
    throw std::invalid_argument("number out of range: " + text);
  } catch (const std::invalid_argument&) {
  }
  // [sign][factor*]pi[/divisor]
  static const std::regex re(
      R"(^([+-]?)\s*(?:([0-9]*\.?[0-9]+(?:[eE][+-]?[0-9]+)?)\s*\*\s*)?pi(?:\s*/\s*([0-9]*\.?[0-9]+))?$)");
  std::smatch m;
  if (!std::regex_match(text, m, re)) throw std::invalid_argument("not a number: " + text);
  double v = kPi;
  if (m[2].matched) v *= std::stod(m[2].str());
  if (m[3].matched) {
    const double d = std::stod(m[3].str());
    if (d == 0.0) throw std::invalid_argument("division by zero: " + text);
    v /= d;
  }
  return m[1].str() == "-" ? -v : v;
}

ParamMap parse_params(const std::string& text, const std::string& source) {
  std::size_t lead = 0;
  const std::string stripped = trim(text, &lead);
  if (!stripped.empty() && stripped.front() == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(stripped);
    } catch (const nlohmann::json::parse_error& e) {
      // Map the byte offset back to a line and column.
      const std::size_t offset = lead + (e.byte > 0 ? e.byte - 1 : 0);
      int line = 1, col = 1;
      for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
        if (text[i] == '\n') {
          ++line;
          col = 1;
        } else {
          ++col;
        }
      }
      throw ParseError(source, line, col, "invalid JSON");
    }
    if (j.contains("config") && j["config"].is_object()) return from_json(j["config"], source);
    return from_json(j, source);
  }

  ParamMap out;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    const std::string body = hash == std::string::npos ? line : line.substr(0, hash);
    std::size_t lead_ws = 0;
    const std::string content = trim(body, &lead_ws);
    if (content.empty()) continue;
    const std::size_t eq = body.find('=');
    if (eq == std::string::npos) {
      throw ParseError(source, line_no, static_cast<int>(lead_ws) + 1,
                       "expected 'key = value'");
    }
    std::size_t key_lead = 0, value_lead = 0;
    const std::string key = trim(body.substr(0, eq), &key_lead);
    const std::string value = trim(body.substr(eq + 1), &value_lead);
    if (!valid_key(key)) {
      throw ParseError(source, line_no, static_cast<int>(key_lead) + 1,
                       "invalid key '" + key + "'");
    }
    if (value.empty()) {
      throw ParseError(source, line_no, static_cast<int>(eq) + 2, "missing value for '" + key + "'");
    }
    if (out.has(key)) {
      throw ParseError(source, line_no, static_cast<int>(key_lead) + 1,
                       "duplicate key '" + key + "'");
    }
    out.set(key, value);
  }
  return out;
}

ParamMap load_params(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, 0, 0, "cannot open config file");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_params(buf.str(), path);
}

ParamMap parse_override(const std::string& assignment) {
  const std::size_t eq = assignment.find('=');
  if (eq == std::string::npos) {
    throw ParseError("--set", 1, 1, "expected key=value, got '" + assignment + "'");
  }
  const std::string key = trim(assignment.substr(0, eq));
  const std::string value = trim(assignment.substr(eq + 1));
  if (!valid_key(key)) throw ParseError("--set", 1, 1, "invalid key '" + key + "'");
  if (value.empty()) {
    throw ParseError("--set", 1, static_cast<int>(eq) + 2, "missing value for '" + key + "'");
  }
  ParamMap out;
  out.set(key, value);
  return out;
}

std::string record_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) return {};
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = trim(buf.str());
  if (text.empty() || text.front() != '{') return {};
  const auto j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.contains("scenario") || !j["scenario"].is_string()) return {};
  return j["scenario"].get<std::string>();
}

}  // namespace chiral
