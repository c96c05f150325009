#pragma once

// Flat key = value configuration with [section] headers.
//
//   # comment
//   [map]
//   name = koebe
//
// Keys are addressed as "section.key". Keys before any header live in the
// empty section and are addressed by the bare key. Every lookup marks the key
// as consumed; reject_unknown() reports whatever the caller never asked for.

#include <charconv>
#include <complex>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hdisc {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& msg, int line = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg), line_(line) {}
  [[nodiscard]] int line() const noexcept { return line_; }

 private:
  int line_;
};

namespace detail {
inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}
}  // namespace detail

class Config {
 public:
  struct Entry {
    std::string value;
    int line = 0;
  };

  static Config parse(std::string_view text) {
    Config c;
    std::string section;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const auto nl = text.find('\n', pos);
      const auto raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
      pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
      ++line_no;
      auto line = raw;
      if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
      line = detail::trim(line);
      if (line.empty()) continue;
      if (line.front() == '[') {
        if (line.back() != ']') throw ConfigError("unterminated section header", line_no);
        section = std::string(detail::trim(line.substr(1, line.size() - 2)));
        if (section.empty()) throw ConfigError("empty section name", line_no);
        continue;
      }
      const auto eq = line.find('=');
      if (eq == std::string_view::npos) throw ConfigError("expected key = value", line_no);
      const auto key = detail::trim(line.substr(0, eq));
      const auto value = detail::trim(line.substr(eq + 1));
      if (key.empty()) throw ConfigError("empty key", line_no);
      const std::string full = section.empty() ? std::string(key) : section + "." + std::string(key);
      if (c.entries_.count(full)) throw ConfigError("duplicate key '" + full + "'", line_no);
      c.entries_[full] = Entry{std::string(value), line_no};
    }
    return c;
  }

  static Config load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
  }

  [[nodiscard]] bool has(const std::string& key) const { return entries_.count(key) != 0; }

  [[nodiscard]] std::optional<std::string> get(const std::string& key) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    used_.insert(key);
    return it->second.value;
  }

  [[nodiscard]] std::string get_or(const std::string& key, const std::string& fallback) const {
    return get(key).value_or(fallback);
  }

  [[nodiscard]] std::optional<double> get_double(const std::string& key) const {
    auto v = get(key);
    if (!v) return std::nullopt;
    return parse_double(*v, line_of(key), key);
  }
  [[nodiscard]] double get_double_or(const std::string& key, double fallback) const {
    return get_double(key).value_or(fallback);
  }

  [[nodiscard]] std::optional<std::uint64_t> get_uint(const std::string& key) const {
    auto v = get(key);
    if (!v) return std::nullopt;
    std::uint64_t out = 0;
    const auto* b = v->data();
    const auto* e = v->data() + v->size();
    auto [p, ec] = std::from_chars(b, e, out);
    if (ec != std::errc() || p != e) {
      // Allow integral scientific notation such as 1e6.
      const double d = parse_double(*v, line_of(key), key);
      if (!(d >= 0.0) || d != std::floor(d) || d > 1.8e19) throw ConfigError("'" + key + "' expects a non-negative integer", line_of(key));
      return static_cast<std::uint64_t>(d);
    }
    return out;
  }
  [[nodiscard]] std::uint64_t get_uint_or(const std::string& key, std::uint64_t fallback) const {
    return get_uint(key).value_or(fallback);
  }

  // "x", "x,y" (real, imaginary).
  [[nodiscard]] std::optional<std::complex<double>> get_complex(const std::string& key) const {
    auto v = get(key);
    if (!v) return std::nullopt;
    return parse_complex(*v, line_of(key), key);
  }

  // Whitespace-separated list of complex literals.
  [[nodiscard]] std::optional<std::vector<std::complex<double>>> get_complex_list(const std::string& key) const {
    auto v = get(key);
    if (!v) return std::nullopt;
    std::vector<std::complex<double>> out;
    std::istringstream ss(*v);
    std::string tok;
    while (ss >> tok) out.push_back(parse_complex(tok, line_of(key), key));
    if (out.empty()) throw ConfigError("'" + key + "' expects at least one value", line_of(key));
    return out;
  }

  [[nodiscard]] std::optional<bool> get_bool(const std::string& key) const {
    auto v = get(key);
    if (!v) return std::nullopt;
    if (*v == "true" || *v == "1" || *v == "yes") return true;
    if (*v == "false" || *v == "0" || *v == "no") return false;
    throw ConfigError("'" + key + "' expects a boolean", line_of(key));
  }

  [[nodiscard]] int line_of(const std::string& key) const {
    auto it = entries_.find(key);
    return it == entries_.end() ? 0 : it->second.line;
  }

  // Throws on the first key that was never looked up (in file order).
  void reject_unknown() const {
    const Entry* first = nullptr;
    std::string first_key;
    for (const auto& [k, e] : entries_) {
      if (used_.count(k)) continue;
      if (!first || e.line < first->line) {
        first = &e;
        first_key = k;
      }
    }
    if (first) throw ConfigError("unknown key '" + first_key + "'", first->line);
  }

  void set(const std::string& key, const std::string& value) { entries_[key] = Entry{value, 0}; }

  static double parse_double(const std::string& s, int line, const std::string& key) {
    std::size_t used = 0;
    double d = 0.0;
    try {
      d = std::stod(s, &used);
    } catch (const std::exception&) {
      throw ConfigError("'" + key + "' expects a number, got '" + s + "'", line);
    }
    if (used != s.size()) throw ConfigError("'" + key + "' expects a number, got '" + s + "'", line);
    return d;
  }

  static std::complex<double> parse_complex(const std::string& s, int line, const std::string& key) {
    const auto comma = s.find(',');
    if (comma == std::string::npos) return {parse_double(s, line, key), 0.0};
    return {parse_double(std::string(detail::trim(s.substr(0, comma))), line, key),
            parse_double(std::string(detail::trim(s.substr(comma + 1))), line, key)};
  }

 private:
  std::map<std::string, Entry> entries_;
  mutable std::set<std::string> used_;
};

}  // namespace hdisc
