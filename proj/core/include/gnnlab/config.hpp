#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace gnnlab {

/// Line-oriented `key = value` configuration with `[section]` headers and
/// `#` comments. Key order within a section is preserved; unknown keys are
/// hard errors at validation time so sweep typos cannot pass silently.
class Config {
public:
  static Config parse(const std::string& text);
  static Config load(const std::string& path);

  bool has(const std::string& section, const std::string& key) const;
  std::string get(const std::string& section, const std::string& key) const;
  std::string get_or(const std::string& section, const std::string& key,
                     const std::string& fallback) const;
  double get_double(const std::string& section, const std::string& key) const;
  double get_double_or(const std::string& section, const std::string& key,
                       double fallback) const;
  std::int64_t get_int(const std::string& section, const std::string& key) const;
  std::int64_t get_int_or(const std::string& section, const std::string& key,
                          std::int64_t fallback) const;

  /// Space- or comma-separated lists.
  std::vector<double> get_double_list(const std::string& section,
                                      const std::string& key) const;
  std::vector<std::int64_t> get_int_list(const std::string& section,
                                         const std::string& key) const;

  /// Throws InputError naming the first key not in the allow list.
  void validate_keys(
      const std::map<std::string, std::vector<std::string>>& allowed) const;

  void set(const std::string& section, const std::string& key,
           const std::string& value);
  std::string serialize() const;

  const std::vector<std::string>& section_order() const { return section_order_; }
  std::vector<std::pair<std::string, std::string>> items(
      const std::string& section) const;

private:
  std::map<std::string, std::vector<std::pair<std::string, std::string>>> data_;
  std::vector<std::string> section_order_;
};

std::vector<std::string> split_list(const std::string& value);

}  // namespace gnnlab
