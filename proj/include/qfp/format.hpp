#pragma once

// Text output helpers shared by the command-line tools: shortest round-trip
// number formatting, CSV quoting and a small ordered key/value report that
// renders either as aligned text or as JSON.

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#ifndef QFP_VERSION
#define QFP_VERSION "0.1.0"
#endif

namespace qfp {

inline constexpr std::string_view kVersion = QFP_VERSION;

/// Shortest decimal string that parses back to the same double.
inline std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, end);
}

inline std::string format_number(std::uint64_t x) { return std::to_string(x); }

/// Quotes a CSV field when it contains a separator, quote or newline.
inline std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

/// Shell-safe rendering of one argument for the reproducible command echo.
inline std::string shell_quote(std::string_view s) {
  if (!s.empty() && s.find_first_not_of("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"
                                        "0123456789-_./=+:,") == std::string_view::npos) {
    return std::string(s);
  }
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out += c;
    }
  }
  out += '\'';
  return out;
}

class Report {
 public:
  using Value = std::variant<double, std::uint64_t, bool, std::string>;

  Report& add(std::string key, Value v) {
    entries_.emplace_back(std::move(key), std::move(v));
    return *this;
  }

  const std::vector<std::pair<std::string, Value>>& entries() const { return entries_; }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const auto& [key, value] : entries_) {
      std::visit([&](const auto& v) { j[key] = v; }, value);
    }
    return j;
  }

  void print(std::ostream& os) const {
    std::size_t width = 0;
    for (const auto& e : entries_) width = std::max(width, e.first.size());
    for (const auto& [key, value] : entries_) {
      os << key << std::string(width - key.size() + 2, ' ') << render(value) << '\n';
    }
  }

  static std::string render(const Value& v) {
    struct {
      std::string operator()(double x) const { return format_number(x); }
      std::string operator()(std::uint64_t x) const { return format_number(x); }
      std::string operator()(bool x) const { return x ? "true" : "false"; }
      std::string operator()(const std::string& x) const { return x; }
    } visitor;
    return std::visit(visitor, v);
  }

 private:
  std::vector<std::pair<std::string, Value>> entries_;
};

}  // namespace qfp
