#pragma once

#include <charconv>
#include <chrono>
#include <compare>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>

namespace aggsent {

/// A UTC calendar day.
class Day {
 public:
  constexpr Day() = default;
  constexpr explicit Day(std::chrono::sys_days d) : d_(d) {}
  constexpr Day(int y, unsigned m, unsigned d)
      : d_(std::chrono::year_month_day{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}}) {}

  constexpr std::chrono::sys_days sys() const noexcept { return d_; }
  constexpr std::int64_t serial() const noexcept { return d_.time_since_epoch().count(); }
  constexpr Day operator+(int n) const noexcept { return Day{d_ + std::chrono::days{n}}; }
  constexpr Day operator-(int n) const noexcept { return Day{d_ - std::chrono::days{n}}; }
  constexpr std::int64_t operator-(Day o) const noexcept { return serial() - o.serial(); }
  constexpr auto operator<=>(const Day&) const = default;

  std::string iso() const {
    std::chrono::year_month_day ymd{d_};
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return buf;
  }

 private:
  std::chrono::sys_days d_{};
};

namespace detail {
inline bool parse_uint(std::string_view s, int& out) {
  if (s.empty()) return false;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && p == s.data() + s.size();
}
}  // namespace detail

/// Parses `YYYY-MM-DD`.
inline std::optional<Day> parse_day(std::string_view s) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
  int y, m, d;
  if (!detail::parse_uint(s.substr(0, 4), y) || !detail::parse_uint(s.substr(5, 2), m) ||
      !detail::parse_uint(s.substr(8, 2), d))
    return std::nullopt;
  std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(m)},
                                  std::chrono::day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) return std::nullopt;
  return Day{std::chrono::sys_days{ymd}};
}

using UtcTime = std::chrono::sys_seconds;

/// Parses `YYYY-MM-DDTHH:MM:SS` followed by `Z`, `+HH:MM` or `-HH:MM`
/// (fractional seconds are accepted and truncated), or a bare date.
inline std::optional<UtcTime> parse_timestamp(std::string_view s) {
  if (s.size() < 10) return std::nullopt;
  auto day = parse_day(s.substr(0, 10));
  if (!day) return std::nullopt;
  UtcTime t{day->sys()};
  if (s.size() == 10) return t;
  if (s[10] != 'T' && s[10] != ' ') return std::nullopt;
  if (s.size() < 19 || s[13] != ':' || s[16] != ':') return std::nullopt;
  int hh, mm, ss;
  if (!detail::parse_uint(s.substr(11, 2), hh) || !detail::parse_uint(s.substr(14, 2), mm) ||
      !detail::parse_uint(s.substr(17, 2), ss) || hh > 23 || mm > 59 || ss > 60)
    return std::nullopt;
  t += std::chrono::hours{hh} + std::chrono::minutes{mm} + std::chrono::seconds{ss};
  std::size_t i = 19;
  if (i < s.size() && s[i] == '.') {
    ++i;
    while (i < s.size() && s[i] >= '0' && s[i] <= '9') ++i;
  }
  std::string_view tz = s.substr(i);
  if (tz.empty() || tz == "Z") return t;
  if (tz.size() != 6 || (tz[0] != '+' && tz[0] != '-') || tz[3] != ':') return std::nullopt;
  int oh, om;
  if (!detail::parse_uint(tz.substr(1, 2), oh) || !detail::parse_uint(tz.substr(4, 2), om)) return std::nullopt;
  auto off = std::chrono::hours{oh} + std::chrono::minutes{om};
  return tz[0] == '+' ? t - off : t + off;
}

inline Day utc_day(UtcTime t) { return Day{std::chrono::floor<std::chrono::days>(t)}; }

inline std::string iso_timestamp(UtcTime t) {
  auto day = utc_day(t);
  auto secs = (t - day.sys()).count();
  char buf[32];
  std::snprintf(buf, sizeof buf, "%sT%02lld:%02lld:%02lldZ", day.iso().c_str(), static_cast<long long>(secs / 3600),
                static_cast<long long>(secs / 60 % 60), static_cast<long long>(secs % 60));
  return buf;
}

/// Inclusive range of days.
struct DayWindow {
  Day first;
  Day last;
  bool contains(Day d) const noexcept { return first <= d && d <= last; }
  std::int64_t length() const noexcept { return last - first + 1; }
};

}  // namespace aggsent
