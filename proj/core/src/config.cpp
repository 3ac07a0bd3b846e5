#include "foldfinder/config.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "foldfinder/errors.hpp"

namespace foldfinder {
namespace {

class Cursor {
 public:
  explicit Cursor(const std::string& text) : text_(text) {}

  bool done() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }
  int line() const { return line_; }
  int column() const { return column_; }

  void step() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  // Skips spaces/tabs and comments; newlines too when `newlines` is set.
  void skip(bool newlines) {
    while (!done()) {
      char c = peek();
      if (c == '#') {
        while (!done() && peek() != '\n') step();
      } else if (c == ' ' || c == '\t' || c == '\r' ||
                 (newlines && c == '\n')) {
        step();
      } else {
        return;
      }
    }
  }

  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError("config: " + message, line_, column_);
  }

  std::string bareword() {
    std::string out;
    while (!done()) {
      char c = peek();
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' ||
          c == '.' || c == '+') {
        out += c;
        step();
      } else {
        break;
      }
    }
    if (out.empty()) fail("expected a key or value");
    return out;
  }

  std::string quoted() {
    step();  // opening quote
    std::string out;
    while (!done() && peek() != '"') {
      out += peek();
      step();
    }
    if (done()) fail("unterminated string");
    step();  // closing quote
    return out;
  }

 private:
  const std::string& text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
};

ConfigValue parse_value(Cursor& cur);

ConfigValue parse_array(Cursor& cur) {
  ConfigValue v;
  v.kind = ConfigValue::Kind::kArray;
  cur.step();  // '['
  cur.skip(true);
  if (!cur.done() && cur.peek() == ']') {
    cur.step();
    return v;
  }
  for (;;) {
    v.array.push_back(parse_value(cur));
    cur.skip(true);
    if (cur.done()) cur.fail("unterminated array");
    if (cur.peek() == ',') {
      cur.step();
      cur.skip(true);
      if (!cur.done() && cur.peek() == ']') {  // trailing comma
        cur.step();
        return v;
      }
      continue;
    }
    if (cur.peek() == ']') {
      cur.step();
      return v;
    }
    cur.fail("expected ',' or ']' in array");
  }
}

ConfigValue parse_value(Cursor& cur) {
  cur.skip(true);
  if (cur.done()) cur.fail("missing value");
  char c = cur.peek();
  if (c == '[') return parse_array(cur);
  ConfigValue v;
  if (c == '"') {
    v.kind = ConfigValue::Kind::kString;
    v.str = cur.quoted();
    return v;
  }
  int line = cur.line(), column = cur.column();
  std::string word = cur.bareword();
  if (word == "true" || word == "false") {
    v.kind = ConfigValue::Kind::kBool;
    v.boolean = word == "true";
    return v;
  }
  const char* begin = word.c_str();
  char* end = nullptr;
  double num = std::strtod(begin, &end);
  if (end != begin + word.size())
    throw ParseError("config: cannot parse value '" + word + "'", line, column);
  v.kind = ConfigValue::Kind::kNumber;
  v.num = num;
  return v;
}

const char* kind_name(ConfigValue::Kind kind) {
  switch (kind) {
    case ConfigValue::Kind::kString: return "string";
    case ConfigValue::Kind::kNumber: return "number";
    case ConfigValue::Kind::kBool: return "boolean";
    case ConfigValue::Kind::kArray: return "array";
  }
  return "?";
}

}  // namespace

Config Config::parse(const std::string& text) {
  Config cfg;
  Cursor cur(text);
  std::string section;
  for (;;) {
    cur.skip(true);
    if (cur.done()) break;
    if (cur.peek() == '[') {
      cur.step();
      cur.skip(false);
      std::string name = cur.bareword();
      cur.skip(false);
      if (cur.done() || cur.peek() != ']') cur.fail("expected ']'");
      cur.step();
      section = name;
      continue;
    }
    std::string key = cur.bareword();
    cur.skip(false);
    if (cur.done() || cur.peek() != '=') cur.fail("expected '=' after key");
    cur.step();
    cur.skip(false);
    ConfigValue value = parse_value(cur);
    std::string full = section.empty() ? key : section + "." + key;
    if (cfg.entries_.count(full)) cur.fail("duplicate key '" + full + "'");
    cfg.entries_.emplace(std::move(full), std::move(value));
  }
  return cfg;
}

Config Config::parse_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

bool Config::has(const std::string& key) const { return entries_.count(key) > 0; }

const ConfigValue& Config::at(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) throw Error("config: missing key '" + key + "'");
  return it->second;
}

namespace {
const ConfigValue& expect_kind(const ConfigValue& v, ConfigValue::Kind kind,
                               const std::string& key) {
  if (v.kind != kind)
    throw Error("config: key '" + key + "' should be a " +
                std::string(kind_name(kind)) + ", found " + kind_name(v.kind));
  return v;
}
}  // namespace

std::string Config::get_string(const std::string& key) const {
  return expect_kind(at(key), ConfigValue::Kind::kString, key).str;
}

double Config::get_number(const std::string& key) const {
  return expect_kind(at(key), ConfigValue::Kind::kNumber, key).num;
}

double Config::get_number_or(const std::string& key, double fallback) const {
  return has(key) ? get_number(key) : fallback;
}

int Config::get_int(const std::string& key) const {
  double v = get_number(key);
  int i = static_cast<int>(v);
  if (static_cast<double>(i) != v)
    throw Error("config: key '" + key + "' should be an integer");
  return i;
}

bool Config::get_bool_or(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  return expect_kind(at(key), ConfigValue::Kind::kBool, key).boolean;
}

VectorXd Config::get_vector(const std::string& key) const {
  const auto& arr = expect_kind(at(key), ConfigValue::Kind::kArray, key).array;
  VectorXd v(static_cast<Eigen::Index>(arr.size()));
  for (std::size_t i = 0; i < arr.size(); ++i)
    v[static_cast<Eigen::Index>(i)] =
        expect_kind(arr[i], ConfigValue::Kind::kNumber, key).num;
  return v;
}

std::vector<std::string> Config::get_strings(const std::string& key) const {
  const auto& arr = expect_kind(at(key), ConfigValue::Kind::kArray, key).array;
  std::vector<std::string> out;
  out.reserve(arr.size());
  for (const auto& v : arr)
    out.push_back(expect_kind(v, ConfigValue::Kind::kString, key).str);
  return out;
}

std::vector<bool> Config::get_bools(const std::string& key) const {
  const auto& arr = expect_kind(at(key), ConfigValue::Kind::kArray, key).array;
  std::vector<bool> out;
  out.reserve(arr.size());
  for (const auto& v : arr)
    out.push_back(expect_kind(v, ConfigValue::Kind::kBool, key).boolean);
  return out;
}

MatrixXd Config::get_matrix(const std::string& key) const {
  const auto& rows = expect_kind(at(key), ConfigValue::Kind::kArray, key).array;
  if (rows.empty()) return MatrixXd();
  const auto& first =
      expect_kind(rows[0], ConfigValue::Kind::kArray, key).array;
  MatrixXd M(static_cast<Eigen::Index>(rows.size()),
             static_cast<Eigen::Index>(first.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = expect_kind(rows[i], ConfigValue::Kind::kArray, key).array;
    if (row.size() != first.size())
      throw Error("config: ragged matrix under key '" + key + "'");
    for (std::size_t j = 0; j < row.size(); ++j)
      M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          expect_kind(row[j], ConfigValue::Kind::kNumber, key).num;
  }
  return M;
}

}  // namespace foldfinder
