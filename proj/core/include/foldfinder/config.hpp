#pragma once

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

namespace foldfinder {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// One value from a problem/config file.
struct ConfigValue {
  enum class Kind { kString, kNumber, kBool, kArray };
  Kind kind = Kind::kNumber;
  std::string str;
  double num = 0.0;
  bool boolean = false;
  std::vector<ConfigValue> array;
};

// Reader for the key-value problem files (a TOML subset):
//   - `key = value` lines, `[section]` headers, dotted keys;
//   - values: quoted strings, numbers (including inf/-inf), true/false,
//     and (nested, possibly multi-line) arrays;
//   - `#` comments.
// Keys are exposed fully qualified ("expressions.g").
class Config {
 public:
  static Config parse(const std::string& text);
  static Config parse_file(const std::string& path);

  bool has(const std::string& key) const;
  const ConfigValue& at(const std::string& key) const;  // throws Error

  std::string get_string(const std::string& key) const;
  double get_number(const std::string& key) const;
  double get_number_or(const std::string& key, double fallback) const;
  int get_int(const std::string& key) const;
  bool get_bool_or(const std::string& key, bool fallback) const;
  VectorXd get_vector(const std::string& key) const;
  std::vector<std::string> get_strings(const std::string& key) const;
  std::vector<bool> get_bools(const std::string& key) const;
  MatrixXd get_matrix(const std::string& key) const;  // array of rows

  const std::map<std::string, ConfigValue>& entries() const { return entries_; }

 private:
  std::map<std::string, ConfigValue> entries_;
};

}  // namespace foldfinder
