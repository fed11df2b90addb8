#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "felp/common.hpp"

namespace felp {

/// Line-oriented `key = value` configuration. `#` starts a comment. A key may
/// repeat; scalar getters return the last occurrence and `all` returns every
/// one in file order.
class ConfigFile {
 public:
  static ConfigFile parse(std::string_view text, const std::string& source = "<string>");
  static ConfigFile load(const std::filesystem::path& path);

  bool has(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<std::string> all(const std::string& key) const;

  /// Appends an entry, overriding earlier scalar values of the same key.
  void set(const std::string& key, const std::string& value);

  /// Throws InvalidArgument naming the first key outside `known`.
  void reject_unknown(const std::vector<std::string>& known) const;

  const std::string& source() const { return source_; }

 private:
  const std::string* last(const std::string& key) const;

  std::string source_;
  std::vector<std::pair<std::string, std::string>> entries_;
  std::vector<int> lines_;
};

/// Splits on whitespace.
std::vector<std::string> split_fields(std::string_view text);
double parse_double(const std::string& text, const std::string& what);
int parse_int(const std::string& text, const std::string& what);

}  // namespace felp
