#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace fastkm::bench {

/// Raised on schema or syntax violations; the CLI maps it to exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Minimal key/value-table configuration format (a TOML subset):
/// `[table]` headers, `key = value` lines, `#` comments. Values are booleans,
/// integers, reals, quoted strings, or flat arrays of reals. Keys are
/// addressed as "table.key".
class Config {
 public:
  using Value = std::variant<bool, long, double, std::string, std::vector<double>>;

  static Config parse(const std::string& text);
  static Config parse_file(const std::string& path);

  bool has(const std::string& key) const { return values_.count(key) > 0; }

  bool get_bool(const std::string& key, std::optional<bool> def = {}) const;
  long get_int(const std::string& key, std::optional<long> def = {}) const;
  double get_real(const std::string& key, std::optional<double> def = {}) const;
  std::string get_string(const std::string& key, std::optional<std::string> def = {}) const;
  std::vector<double> get_real_array(const std::string& key) const;

  void set(const std::string& key, Value v) { values_[key] = std::move(v); }

  std::vector<std::string> keys() const;

  /// Rejects any present key not in `allowed` (exact "table.key" names),
  /// naming the offender.
  void require_known_keys(const std::vector<std::string>& allowed) const;

 private:
  const Value* find(const std::string& key) const;
  std::map<std::string, Value> values_;
};

}  // namespace fastkm::bench
