#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace spintime {

/// Shortest round-trip decimal form of v, locale-independent.
std::string fmt_g(double v);

std::string trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char delim);

/// FNV-1a 64-bit content hash (manifest fingerprints).
std::uint64_t fnv1a64(std::string_view data);

/// Sectioned plain-text file:
///   [section]
///   key = value
/// '#' starts a comment; blank lines are ignored. Bare (un-keyed) lines inside
/// a section are kept in order as the section's body rows (used for matrix and
/// table payloads).
class KeyFile {
 public:
  static KeyFile parse(std::istream& is);
  static KeyFile parse_file(const std::string& path);

  bool has(const std::string& section, const std::string& key) const;
  bool has_section(const std::string& section) const;

  /// Throws ConfigError when absent.
  const std::string& get(const std::string& section, const std::string& key) const;
  std::string get_or(const std::string& section, const std::string& key,
                     std::string fallback) const;

  double get_double(const std::string& section, const std::string& key) const;
  double get_double_or(const std::string& section, const std::string& key,
                       double fallback) const;
  long long get_int(const std::string& section, const std::string& key) const;
  long long get_int_or(const std::string& section, const std::string& key,
                       long long fallback) const;

  const std::vector<std::string>& body(const std::string& section) const;
  std::vector<std::string> section_names() const;

 private:
  struct Section {
    std::string name;
    std::vector<std::pair<std::string, std::string>> entries;
    std::vector<std::string> body_rows;
  };
  const Section* find(const std::string& section) const;
  std::vector<Section> sections_;
};

/// strtod that rejects trailing garbage; throws ConfigError.
double parse_double(std::string_view text);
long long parse_int(std::string_view text);

}  // namespace spintime
