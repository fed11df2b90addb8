#include "felp/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace felp {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

std::vector<std::string> split_fields(std::string_view text) {
  std::vector<std::string> out;
  std::istringstream in{std::string(text)};
  std::string field;
  while (in >> field) out.push_back(field);
  return out;
}

double parse_double(const std::string& text, const std::string& what) {
  double value = 0.0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end) {
    throw InvalidArgument(what + ": expected a number, got '" + text + "'");
  }
  return value;
}

int parse_int(const std::string& text, const std::string& what) {
  int value = 0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end) {
    throw InvalidArgument(what + ": expected an integer, got '" + text + "'");
  }
  return value;
}

ConfigFile ConfigFile::parse(std::string_view text, const std::string& source) {
  ConfigFile cfg;
  cfg.source_ = source;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw InvalidArgument(source + ":" + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw InvalidArgument(source + ":" + std::to_string(line_no) + ": empty key");
    }
    cfg.entries_.emplace_back(std::string(key), std::string(value));
    cfg.lines_.push_back(line_no);
  }
  return cfg;
}

ConfigFile ConfigFile::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open config file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str(), path.string());
}

const std::string* ConfigFile::last(const std::string& key) const {
  for (auto it = entries_.rbegin(); it != entries_.rend(); ++it) {
    if (it->first == key) return &it->second;
  }
  return nullptr;
}

bool ConfigFile::has(const std::string& key) const { return last(key) != nullptr; }

std::string ConfigFile::get_string(const std::string& key, const std::string& fallback) const {
  const std::string* v = last(key);
  return v ? *v : fallback;
}

double ConfigFile::get_double(const std::string& key, double fallback) const {
  const std::string* v = last(key);
  return v ? parse_double(*v, source_ + ": " + key) : fallback;
}

int ConfigFile::get_int(const std::string& key, int fallback) const {
  const std::string* v = last(key);
  return v ? parse_int(*v, source_ + ": " + key) : fallback;
}

bool ConfigFile::get_bool(const std::string& key, bool fallback) const {
  const std::string* v = last(key);
  if (!v) return fallback;
  if (*v == "true" || *v == "1" || *v == "yes") return true;
  if (*v == "false" || *v == "0" || *v == "no") return false;
  throw InvalidArgument(source_ + ": " + key + ": expected a boolean, got '" + *v + "'");
}

std::vector<std::string> ConfigFile::all(const std::string& key) const {
  std::vector<std::string> out;
  for (const auto& [k, v] : entries_) {
    if (k == key) out.push_back(v);
  }
  return out;
}

void ConfigFile::set(const std::string& key, const std::string& value) {
  entries_.emplace_back(key, value);
  lines_.push_back(0);
}

void ConfigFile::reject_unknown(const std::vector<std::string>& known) const {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (std::find(known.begin(), known.end(), entries_[i].first) == known.end()) {
      throw InvalidArgument(source_ + ":" + std::to_string(lines_[i]) + ": unknown key '" +
                            entries_[i].first + "'");
    }
  }
}

}  // namespace felp
