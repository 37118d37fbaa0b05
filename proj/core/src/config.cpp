#include "gnnlab/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "gnnlab/error.hpp"

namespace gnnlab {

namespace {

std::string trim(const std::string& s) {
  auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

}  // namespace

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::string token;
  for (char c : value) {
    if (c == ',' || c == ' ' || c == '\t') {
      if (!token.empty()) out.push_back(token);
      token.clear();
    } else {
      token.push_back(c);
    }
  }
  if (!token.empty()) out.push_back(token);
  return out;
}

Config Config::parse(const std::string& text) {
  Config cfg;
  std::istringstream in(text);
  std::string line;
  std::string section;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ParseError("unterminated section header", line_no);
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) throw ParseError("empty section name", line_no);
      if (!cfg.data_.count(section)) {
        cfg.data_[section] = {};
        cfg.section_order_.push_back(section);
      }
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError("expected 'key = value'", line_no);
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ParseError("empty key", line_no);
    if (section.empty())
      throw ParseError("key '" + key + "' outside any [section]", line_no);
    cfg.data_[section].emplace_back(key, value);
  }
  return cfg;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

bool Config::has(const std::string& section, const std::string& key) const {
  auto it = data_.find(section);
  if (it == data_.end()) return false;
  return std::any_of(it->second.begin(), it->second.end(),
                     [&](const auto& kv) { return kv.first == key; });
}

std::string Config::get(const std::string& section, const std::string& key) const {
  auto it = data_.find(section);
  if (it != data_.end())
    for (const auto& [k, v] : it->second)
      if (k == key) return v;
  throw InputError("missing config key [" + section + "] " + key);
}

std::string Config::get_or(const std::string& section, const std::string& key,
                           const std::string& fallback) const {
  return has(section, key) ? get(section, key) : fallback;
}

double Config::get_double(const std::string& section, const std::string& key) const {
  auto v = get(section, key);
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size())
    throw InputError("config key [" + section + "] " + key +
                     " is not a real number: '" + v + "'");
  return out;
}

double Config::get_double_or(const std::string& section, const std::string& key,
                             double fallback) const {
  return has(section, key) ? get_double(section, key) : fallback;
}

std::int64_t Config::get_int(const std::string& section,
                             const std::string& key) const {
  auto v = get(section, key);
  std::int64_t out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size())
    throw InputError("config key [" + section + "] " + key +
                     " is not an integer: '" + v + "'");
  return out;
}

std::int64_t Config::get_int_or(const std::string& section, const std::string& key,
                                std::int64_t fallback) const {
  return has(section, key) ? get_int(section, key) : fallback;
}

std::vector<double> Config::get_double_list(const std::string& section,
                                            const std::string& key) const {
  std::vector<double> out;
  for (const auto& tok : split_list(get(section, key))) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size())
      throw InputError("config key [" + section + "] " + key +
                       " has a non-numeric entry: '" + tok + "'");
    out.push_back(v);
  }
  if (out.empty())
    throw InputError("config key [" + section + "] " + key + " is an empty list");
  return out;
}

std::vector<std::int64_t> Config::get_int_list(const std::string& section,
                                               const std::string& key) const {
  std::vector<std::int64_t> out;
  for (const auto& tok : split_list(get(section, key))) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size())
      throw InputError("config key [" + section + "] " + key +
                       " has a non-integer entry: '" + tok + "'");
    out.push_back(v);
  }
  if (out.empty())
    throw InputError("config key [" + section + "] " + key + " is an empty list");
  return out;
}

void Config::validate_keys(
    const std::map<std::string, std::vector<std::string>>& allowed) const {
  for (const auto& [section, entries] : data_) {
    auto it = allowed.find(section);
    if (it == allowed.end())
      throw InputError("unknown config section [" + section + "]");
    for (const auto& [key, value] : entries) {
      if (std::find(it->second.begin(), it->second.end(), key) ==
          it->second.end())
        throw InputError("unknown config key [" + section + "] " + key);
    }
  }
}

void Config::set(const std::string& section, const std::string& key,
                 const std::string& value) {
  if (!data_.count(section)) {
    data_[section] = {};
    section_order_.push_back(section);
  }
  for (auto& [k, v] : data_[section])
    if (k == key) {
      v = value;
      return;
    }
  data_[section].emplace_back(key, value);
}

std::string Config::serialize() const {
  std::ostringstream out;
  for (const auto& section : section_order_) {
    out << "[" << section << "]\n";
    auto it = data_.find(section);
    for (const auto& [k, v] : it->second) out << k << " = " << v << "\n";
    out << "\n";
  }
  return out.str();
}

std::vector<std::pair<std::string, std::string>> Config::items(
    const std::string& section) const {
  auto it = data_.find(section);
  if (it == data_.end()) return {};
  return it->second;
}

}  // namespace gnnlab
