#include "spintime/textio.hpp"

#include <cctype>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <sstream>

#include "spintime/errors.hpp"

namespace spintime {

std::string fmt_g(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split(std::string_view s, char delim) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    std::size_t pos = s.find(delim, start);
    if (pos == std::string_view::npos) {
      out.push_back(trim(s.substr(start)));
      break;
    }
    out.push_back(trim(s.substr(start, pos - start)));
    start = pos + 1;
  }
  return out;
}

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

double parse_double(std::string_view text) {
  const std::string t = trim(text);
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size())
    throw ConfigError("not a number: '" + t + "'");
  return v;
}

long long parse_int(std::string_view text) {
  const std::string t = trim(text);
  long long v = 0;
  auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || res.ec != std::errc{} || res.ptr != t.data() + t.size())
    throw ConfigError("not an integer: '" + t + "'");
  return v;
}

KeyFile KeyFile::parse(std::istream& is) {
  KeyFile kf;
  Section* cur = nullptr;
  std::string line;
  while (std::getline(is, line)) {
    if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (t.front() == '[') {
      if (t.back() != ']') throw ConfigError("malformed section header: " + t);
      kf.sections_.push_back({trim(t.substr(1, t.size() - 2)), {}, {}});
      cur = &kf.sections_.back();
      continue;
    }
    if (!cur) throw ConfigError("content before any [section] header");
    if (auto eq = t.find('='); eq != std::string::npos) {
      cur->entries.emplace_back(trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
    } else {
      cur->body_rows.push_back(t);
    }
  }
  return kf;
}

KeyFile KeyFile::parse_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open file: " + path);
  return parse(f);
}

const KeyFile::Section* KeyFile::find(const std::string& section) const {
  for (const auto& s : sections_)
    if (s.name == section) return &s;
  return nullptr;
}

bool KeyFile::has_section(const std::string& section) const {
  return find(section) != nullptr;
}

bool KeyFile::has(const std::string& section, const std::string& key) const {
  const Section* s = find(section);
  if (!s) return false;
  for (const auto& [k, v] : s->entries)
    if (k == key) return true;
  return false;
}

const std::string& KeyFile::get(const std::string& section, const std::string& key) const {
  const Section* s = find(section);
  if (s) {
    for (const auto& [k, v] : s->entries)
      if (k == key) return v;
  }
  throw ConfigError("missing key [" + section + "] " + key);
}

std::string KeyFile::get_or(const std::string& section, const std::string& key,
                            std::string fallback) const {
  return has(section, key) ? get(section, key) : std::move(fallback);
}

double KeyFile::get_double(const std::string& section, const std::string& key) const {
  return parse_double(get(section, key));
}

double KeyFile::get_double_or(const std::string& section, const std::string& key,
                              double fallback) const {
  return has(section, key) ? parse_double(get(section, key)) : fallback;
}

long long KeyFile::get_int(const std::string& section, const std::string& key) const {
  return parse_int(get(section, key));
}

long long KeyFile::get_int_or(const std::string& section, const std::string& key,
                              long long fallback) const {
  return has(section, key) ? parse_int(get(section, key)) : fallback;
}

const std::vector<std::string>& KeyFile::body(const std::string& section) const {
  const Section* s = find(section);
  if (!s) throw ConfigError("missing section [" + section + "]");
  return s->body_rows;
}

std::vector<std::string> KeyFile::section_names() const {
  std::vector<std::string> out;
  out.reserve(sections_.size());
  for (const auto& s : sections_) out.push_back(s.name);
  return out;
}

}  // namespace spintime
