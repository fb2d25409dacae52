#pragma once
// Locale-independent text helpers shared by the CLI and the file formats:
// pi-expression angle parsing, fixed decimal formatting, and the plain
// key=value configuration format.

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace rsp::textio {

inline constexpr double kPi = std::numbers::pi;

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

inline std::optional<double> parse_plain_number(std::string_view s) {
  double v = 0.0;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc{} || ptr != end) return std::nullopt;
  return v;
}

}  // namespace detail

// Accepts plain decimals and pi expressions: "pi", "pi/2", "3pi/4", "-pi/8",
// "2pi", "0.75", "3*pi/4". Throws std::invalid_argument on anything else.
inline double parse_angle(std::string_view text) {
  std::string_view s = detail::trim(text);
  if (s.empty()) throw std::invalid_argument("parse_angle: empty string");

  if (auto plain = detail::parse_plain_number(s)) return *plain;

  double sign = 1.0;
  if (s.front() == '+' || s.front() == '-') {
    if (s.front() == '-') sign = -1.0;
    s.remove_prefix(1);
  }

  const std::size_t pi_pos = s.find("pi");
  if (pi_pos == std::string_view::npos)
    throw std::invalid_argument("parse_angle: cannot parse '" +
                                std::string(text) + "'");

  double coeff = 1.0;
  std::string_view head = detail::trim(s.substr(0, pi_pos));
  if (!head.empty()) {
    if (head.back() == '*') head = detail::trim(head.substr(0, head.size() - 1));
    const auto c = detail::parse_plain_number(head);
    if (!c)
      throw std::invalid_argument("parse_angle: bad coefficient in '" +
                                  std::string(text) + "'");
    coeff = *c;
  }

  double denom = 1.0;
  std::string_view tail = detail::trim(s.substr(pi_pos + 2));
  if (!tail.empty()) {
    if (tail.front() != '/')
      throw std::invalid_argument("parse_angle: bad suffix in '" +
                                  std::string(text) + "'");
    const auto d = detail::parse_plain_number(detail::trim(tail.substr(1)));
    if (!d || *d == 0.0)
      throw std::invalid_argument("parse_angle: bad denominator in '" +
                                  std::string(text) + "'");
    denom = *d;
  }
  return sign * coeff * kPi / denom;
}

// Fixed decimal formatting, '.' separator, no locale involvement.
inline std::string format_fixed(double v, int decimals = 12) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

// Renders small rational multiples of pi symbolically ("pi/2", "-3pi/4"),
// falling back to a plain decimal. Output parses back via parse_angle.
inline std::string format_angle(double v) {
  if (v == 0.0) return "0";
  for (int q = 1; q <= 24; ++q) {
    const double p = v * q / kPi;
    const double rp = std::round(p);
    if (rp != 0.0 && std::abs(p - rp) < 1e-12 && std::abs(rp) <= 48.0) {
      const long num = static_cast<long>(rp);
      std::string out = num < 0 ? "-" : "";
      if (std::labs(num) != 1) out += std::to_string(std::labs(num));
      out += "pi";
      if (q != 1) out += "/" + std::to_string(q);
      return out;
    }
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// key=value file, one entry per line, '#' starts a comment.
class Config {
 public:
  Config() = default;

  static Config parse(std::istream& in) {
    Config cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      std::string_view s(line);
      if (const auto hash = s.find('#'); hash != std::string_view::npos)
        s = s.substr(0, hash);
      s = detail::trim(s);
      if (s.empty()) continue;
      const auto eq = s.find('=');
      if (eq == std::string_view::npos)
        throw std::invalid_argument("config line " + std::to_string(lineno) +
                                    ": expected key=value");
      const std::string key(detail::trim(s.substr(0, eq)));
      const std::string value(detail::trim(s.substr(eq + 1)));
      if (key.empty())
        throw std::invalid_argument("config line " + std::to_string(lineno) +
                                    ": empty key");
      cfg.values_[key] = value;
    }
    return cfg;
  }

  static Config load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    return parse(in);
  }

  std::optional<std::string> get(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    return it->second;
  }

  std::optional<double> get_angle(const std::string& key) const {
    const auto v = get(key);
    if (!v) return std::nullopt;
    return parse_angle(*v);
  }

  std::optional<double> get_double(const std::string& key) const {
    const auto v = get(key);
    if (!v) return std::nullopt;
    const auto d = detail::parse_plain_number(detail::trim(*v));
    if (!d)
      throw std::invalid_argument("config key '" + key + "': bad number '" +
                                  *v + "'");
    return d;
  }

  std::optional<std::uint64_t> get_uint(const std::string& key) const {
    const auto v = get(key);
    if (!v) return std::nullopt;
    const std::string_view s = detail::trim(*v);
    std::uint64_t out = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec != std::errc{} || ptr != s.data() + s.size())
      throw std::invalid_argument("config key '" + key +
                                  "': bad unsigned integer '" + *v + "'");
    return out;
  }

  std::size_t size() const { return values_.size(); }

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace rsp::textio
