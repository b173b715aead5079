#include "fastkm/bench/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace fastkm::bench {

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool parse_number(const std::string& tok, Config::Value& out) {
  // integer first, then real
  {
    long v = 0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec == std::errc() && p == tok.data() + tok.size()) {
      out = v;
      return true;
    }
  }
  try {
    size_t pos = 0;
    double v = std::stod(tok, &pos);
    if (pos == tok.size()) {
      out = v;
      return true;
    }
  } catch (const std::exception&) {
  }
  return false;
}

Config::Value parse_value(const std::string& raw, int lineno) {
  std::string tok = trim(raw);
  if (tok.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": empty value");
  if (tok == "true") return true;
  if (tok == "false") return false;
  if (tok.front() == '"') {
    if (tok.size() < 2 || tok.back() != '"')
      throw ConfigError("config line " + std::to_string(lineno) + ": unterminated string");
    return tok.substr(1, tok.size() - 2);
  }
  if (tok.front() == '[') {
    if (tok.back() != ']')
      throw ConfigError("config line " + std::to_string(lineno) + ": unterminated array");
    std::vector<double> arr;
    std::string inner = tok.substr(1, tok.size() - 2);
    std::stringstream ss(inner);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      if (item.empty()) continue;
      Config::Value v;
      if (!parse_number(item, v))
        throw ConfigError("config line " + std::to_string(lineno) + ": bad array element '" + item + "'");
      arr.push_back(std::holds_alternative<long>(v) ? static_cast<double>(std::get<long>(v))
                                                    : std::get<double>(v));
    }
    return arr;
  }
  Config::Value v;
  if (!parse_number(tok, v))
    throw ConfigError("config line " + std::to_string(lineno) + ": cannot parse value '" + tok + "'");
  return v;
}

}  // namespace

Config Config::parse(const std::string& text) {
  Config cfg;
  std::istringstream in(text);
  std::string line, table;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    bool in_str = false;
    for (size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') {
        in_str = !in_str;
      } else if (line[i] == '#' && !in_str) {
        line = line.substr(0, i);
        break;
      }
    }
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("config line " + std::to_string(lineno) + ": malformed table header");
      table = trim(line.substr(1, line.size() - 2));
      if (table.empty())
        throw ConfigError("config line " + std::to_string(lineno) + ": empty table name");
      continue;
    }
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
    std::string full = table.empty() ? key : table + "." + key;
    if (cfg.values_.count(full))
      throw ConfigError("config line " + std::to_string(lineno) + ": duplicate key '" + full + "'");
    cfg.values_[full] = parse_value(line.substr(eq + 1), lineno);
  }
  return cfg;
}

Config Config::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

const Config::Value* Config::find(const std::string& key) const {
  auto it = values_.find(key);
  return it == values_.end() ? nullptr : &it->second;
}

bool Config::get_bool(const std::string& key, std::optional<bool> def) const {
  const Value* v = find(key);
  if (!v) {
    if (def) return *def;
    throw ConfigError("missing config key '" + key + "'");
  }
  if (!std::holds_alternative<bool>(*v)) throw ConfigError("config key '" + key + "' is not a boolean");
  return std::get<bool>(*v);
}

long Config::get_int(const std::string& key, std::optional<long> def) const {
  const Value* v = find(key);
  if (!v) {
    if (def) return *def;
    throw ConfigError("missing config key '" + key + "'");
  }
  if (!std::holds_alternative<long>(*v)) throw ConfigError("config key '" + key + "' is not an integer");
  return std::get<long>(*v);
}

double Config::get_real(const std::string& key, std::optional<double> def) const {
  const Value* v = find(key);
  if (!v) {
    if (def) return *def;
    throw ConfigError("missing config key '" + key + "'");
  }
  if (std::holds_alternative<long>(*v)) return static_cast<double>(std::get<long>(*v));
  if (!std::holds_alternative<double>(*v)) throw ConfigError("config key '" + key + "' is not a number");
  return std::get<double>(*v);
}

std::string Config::get_string(const std::string& key, std::optional<std::string> def) const {
  const Value* v = find(key);
  if (!v) {
    if (def) return *def;
    throw ConfigError("missing config key '" + key + "'");
  }
  if (!std::holds_alternative<std::string>(*v))
    throw ConfigError("config key '" + key + "' is not a string");
  return std::get<std::string>(*v);
}

std::vector<double> Config::get_real_array(const std::string& key) const {
  const Value* v = find(key);
  if (!v) throw ConfigError("missing config key '" + key + "'");
  if (!std::holds_alternative<std::vector<double>>(*v))
    throw ConfigError("config key '" + key + "' is not an array");
  return std::get<std::vector<double>>(*v);
}

std::vector<std::string> Config::keys() const {
  std::vector<std::string> out;
  out.reserve(values_.size());
  for (const auto& [k, _] : values_) out.push_back(k);
  return out;
}

void Config::require_known_keys(const std::vector<std::string>& allowed) const {
  for (const auto& [k, _] : values_) {
    if (std::find(allowed.begin(), allowed.end(), k) == allowed.end())
      throw ConfigError("unknown config key '" + k + "'");
  }
}

}  // namespace fastkm::bench
