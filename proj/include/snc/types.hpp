#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace snc {

using Timestamp = std::chrono::sys_seconds;
using Date = std::chrono::sys_days;

enum class Platform { telegram, reddit };
enum class Lang { ru, en_or_unknown };
enum class PeriodLabel { pre, acute, post, full };

// Fatal problem with an input file (exit code 1).
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid or inconsistent configuration (exit code 2).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline std::string_view to_string(Platform p) {
    return p == Platform::telegram ? "telegram" : "reddit";
}

inline std::string_view to_string(Lang l) {
    return l == Lang::ru ? "ru" : "en_or_unknown";
}

inline std::string_view to_string(PeriodLabel p) {
    switch (p) {
        case PeriodLabel::pre: return "pre";
        case PeriodLabel::acute: return "acute";
        case PeriodLabel::post: return "post";
        case PeriodLabel::full: return "full";
    }
    return "full";
}

inline std::optional<Platform> parse_platform(std::string_view s) {
    if (s == "telegram") return Platform::telegram;
    if (s == "reddit") return Platform::reddit;
    return std::nullopt;
}

inline std::optional<PeriodLabel> parse_period(std::string_view s) {
    if (s == "pre") return PeriodLabel::pre;
    if (s == "acute") return PeriodLabel::acute;
    if (s == "post") return PeriodLabel::post;
    if (s == "full") return PeriodLabel::full;
    return std::nullopt;
}

// One normalized message, post or comment.
struct Record {
    Platform platform = Platform::telegram;
    std::string event_id;
    std::string source;
    std::string record_id;
    Timestamp timestamp{};
    std::string text;
    std::optional<std::int64_t> views;
    std::optional<std::int64_t> forwards;
    std::optional<std::int64_t> score;
    std::optional<std::int64_t> num_comments;
    std::optional<std::string> reply_to;
    Lang lang = Lang::en_or_unknown;
    bool dup_flag = false;
    std::uint64_t text_hash = 0;
    std::size_t char_len = 0;  // code points after whitespace strip
    std::size_t word_len = 0;  // whitespace-separated words

    // Corpus-wide identity; record ids are only unique per channel on Telegram.
    std::string key() const {
        std::string k{to_string(platform)};
        k += ':';
        k += source;
        k += ':';
        k += record_id;
        return k;
    }
};

struct EventWindow {
    std::string event_id;
    Date start{};
    Date end{};  // inclusive calendar day
    std::optional<Date> t0;
    std::vector<std::string> keywords;  // lowercase; empty disables keyword filtering

    Timestamp start_instant() const { return Timestamp{start}; }
    // First instant after the window.
    Timestamp end_exclusive() const { return Timestamp{end + std::chrono::days{1}}; }
};

struct SliceKey {
    Platform platform = Platform::telegram;
    std::string source;

    auto operator<=>(const SliceKey&) const = default;
};

// All records of one (event, platform, source), ascending by timestamp.
struct SourceSlice {
    std::string event_id;
    Platform platform = Platform::telegram;
    std::string source;
    std::vector<Record> records;

    SliceKey key() const { return {platform, source}; }
    bool empty() const { return records.empty(); }
};

}  // namespace snc
