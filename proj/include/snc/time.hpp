#pragma once

#include <charconv>
#include <chrono>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>

#include "snc/types.hpp"

namespace snc {

namespace detail {

inline bool read_int(std::string_view s, std::size_t pos, std::size_t len, int& out) {
    if (pos + len > s.size()) return false;
    for (std::size_t i = pos; i < pos + len; ++i)
        if (s[i] < '0' || s[i] > '9') return false;
    auto [p, ec] = std::from_chars(s.data() + pos, s.data() + pos + len, out);
    return ec == std::errc{};
}

}  // namespace detail

// YYYY-MM-DD
inline std::optional<Date> parse_date(std::string_view s) {
    using namespace std::chrono;
    int y = 0, m = 0, d = 0;
    if (s.size() < 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
    if (!detail::read_int(s, 0, 4, y) || !detail::read_int(s, 5, 2, m) ||
        !detail::read_int(s, 8, 2, d))
        return std::nullopt;
    if (s.size() != 10) return std::nullopt;
    year_month_day ymd{year{y}, month{static_cast<unsigned>(m)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) return std::nullopt;
    return sys_days{ymd};
}

// ISO-8601 instant: date, 'T' or ' ', hh:mm[:ss[.fff]], then 'Z', +hh:mm, -hh:mm or nothing
// (nothing is read as UTC). A bare date is midnight UTC. Fractions are truncated.
inline std::optional<Timestamp> parse_timestamp(std::string_view s) {
    using namespace std::chrono;
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    if (s.size() < 10) return std::nullopt;
    auto date = parse_date(s.substr(0, 10));
    if (!date) return std::nullopt;
    if (s.size() == 10) return Timestamp{*date};
    if (s[10] != 'T' && s[10] != 't' && s[10] != ' ') return std::nullopt;
    int hh = 0, mm = 0, ss = 0;
    if (!detail::read_int(s, 11, 2, hh) || s.size() < 16 || s[13] != ':' ||
        !detail::read_int(s, 14, 2, mm))
        return std::nullopt;
    std::size_t pos = 16;
    if (pos < s.size() && s[pos] == ':') {
        if (!detail::read_int(s, pos + 1, 2, ss)) return std::nullopt;
        pos += 3;
        if (pos < s.size() && (s[pos] == '.' || s[pos] == ',')) {
            ++pos;
            std::size_t digits = 0;
            while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') {
                ++pos;
                ++digits;
            }
            if (digits == 0) return std::nullopt;
        }
    }
    if (hh > 23 || mm > 59 || ss > 60) return std::nullopt;
    seconds offset{0};
    if (pos < s.size()) {
        char c = s[pos];
        if ((c == 'Z' || c == 'z') && pos + 1 == s.size()) {
            // UTC
        } else if (c == '+' || c == '-') {
            int oh = 0, om = 0;
            if (!detail::read_int(s, pos + 1, 2, oh)) return std::nullopt;
            std::size_t rest = pos + 3;
            if (rest < s.size() && s[rest] == ':') ++rest;
            if (rest < s.size()) {
                if (!detail::read_int(s, rest, 2, om) || rest + 2 != s.size()) return std::nullopt;
            }
            offset = hours{oh} + minutes{om};
            if (c == '-') offset = -offset;
        } else {
            return std::nullopt;
        }
    }
    return Timestamp{*date} + hours{hh} + minutes{mm} + seconds{ss} - offset;
}

inline Timestamp from_epoch_seconds(std::int64_t s) {
    return Timestamp{std::chrono::seconds{s}};
}

inline std::int64_t epoch_seconds(Timestamp t) {
    return t.time_since_epoch().count();
}

inline std::string format_date(Date d) {
    std::chrono::year_month_day ymd{d};
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return buf;
}

// YYYY-MM-DDTHH:MM:SSZ
inline std::string format_timestamp(Timestamp t) {
    using namespace std::chrono;
    auto day = floor<days>(t);
    hh_mm_ss hms{t - day};
    char buf[32];
    std::snprintf(buf, sizeof buf, "%sT%02d:%02d:%02dZ", format_date(day).c_str(),
                  static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                  static_cast<int>(hms.seconds().count()));
    return buf;
}

}  // namespace snc
