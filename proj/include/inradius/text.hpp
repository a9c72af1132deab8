#pragma once

#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

// Small helpers shared by the line-based text formats.
namespace inradius::detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

inline std::string strip_comment(std::string_view line) {
  const auto hash = line.find('#');
  return trim(hash == std::string_view::npos ? line : line.substr(0, hash));
}

/// "k1=v1 k2=v2a v2b ..." -> {k1: "v1", k2: "v2a v2b"}
inline std::map<std::string, std::string> parse_header(std::string_view s) {
  std::map<std::string, std::string> out;
  std::istringstream in{std::string(s)};
  std::string tok;
  std::string key;
  while (in >> tok) {
    const auto eq = tok.find('=');
    if (eq != std::string::npos) {
      key = tok.substr(0, eq);
      out[key] = tok.substr(eq + 1);
    } else if (!key.empty()) {
      out[key] += (out[key].empty() ? "" : " ") + tok;
    } else {
      throw std::invalid_argument("malformed header '" + std::string(s) + "'");
    }
  }
  return out;
}

template <typename T>
std::vector<T> parse_numbers(std::string_view s) {
  std::string buf(s);
  for (char& c : buf)
    if (c == ',') c = ' ';
  std::istringstream in(buf);
  std::vector<T> out;
  T v{};
  while (in >> v) out.push_back(v);
  if (!in.eof()) throw std::invalid_argument("expected numbers in '" + std::string(s) + "'");
  return out;
}

/// Shortest round-trip-safe decimal form.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace inradius::detail
