#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace roughmild {

/// Line-oriented configuration: `key = value` entries grouped under
/// bracketed `[section]` headers, `#` comments, no nesting.  Keys are
/// addressed as "section.key"; entries before any section header live in
/// the "" section.
class Config {
 public:
  static Config from_string(const std::string& text);
  static Config from_file(const std::string& path);

  bool has(const std::string& key) const;

  std::string get_string(const std::string& key, const std::string& fallback) const;
  std::string require_string(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  /// Comma-separated list; empty value yields an empty list.
  std::vector<std::string> get_list(const std::string& key) const;

  /// FNV-1a hash of the canonical (sorted, normalized) entry list; stamped
  /// into every CSV row so outputs are traceable to their configuration.
  std::string hash() const;

  const std::map<std::string, std::string>& entries() const { return entries_; }

 private:
  std::map<std::string, std::string> entries_;
};

/// Parse error with the offending line number, for CLI usage errors.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, const std::string& message)
      : std::runtime_error("config line " + std::to_string(line) + ": " + message),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

}  // namespace roughmild
