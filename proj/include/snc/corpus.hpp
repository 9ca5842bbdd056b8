#pragma once

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "snc/text.hpp"
#include "snc/time.hpp"
#include "snc/types.hpp"

namespace snc::corpus {

struct LoadOptions {
    // When unset, each line must carry a "platform" key.
    std::optional<Platform> platform;
    // Used when a line carries no event_id / source.
    std::string default_event;
    std::string default_source;
    std::size_t min_text_chars = 10;
    double cyrillic_threshold = 0.15;
};

struct LoadStats {
    std::size_t lines = 0;
    std::size_t loaded = 0;
    std::size_t malformed = 0;      // bad JSON or a missing mandatory field
    std::size_t dropped_empty = 0;  // no text at all (media-only)
    std::size_t dropped_short = 0;  // below the character floor
    std::size_t duplicate_api = 0;  // same record retrieved twice

    LoadStats& operator+=(const LoadStats& o) {
        lines += o.lines;
        loaded += o.loaded;
        malformed += o.malformed;
        dropped_empty += o.dropped_empty;
        dropped_short += o.dropped_short;
        duplicate_api += o.duplicate_api;
        return *this;
    }
};

enum class LineOutcome { loaded, malformed, dropped_empty, dropped_short };

namespace detail {

inline const nlohmann::json* find_any(const nlohmann::json& j,
                                      std::initializer_list<const char*> keys) {
    for (const char* k : keys) {
        auto it = j.find(k);
        if (it != j.end() && !it->is_null()) return &*it;
    }
    return nullptr;
}

inline std::optional<std::string> scalar_string(const nlohmann::json* v) {
    if (!v) return std::nullopt;
    if (v->is_string()) return v->get<std::string>();
    if (v->is_number_integer()) return std::to_string(v->get<std::int64_t>());
    if (v->is_number_unsigned()) return std::to_string(v->get<std::uint64_t>());
    return std::nullopt;
}

inline std::optional<std::int64_t> integer(const nlohmann::json* v) {
    if (!v) return std::nullopt;
    if (v->is_number_integer()) return v->get<std::int64_t>();
    if (v->is_number_unsigned()) return static_cast<std::int64_t>(v->get<std::uint64_t>());
    if (v->is_number_float()) return static_cast<std::int64_t>(v->get<double>());
    return std::nullopt;
}

inline std::optional<std::int64_t> non_negative(const nlohmann::json* v) {
    auto x = integer(v);
    if (x && *x < 0) return std::nullopt;
    return x;
}

inline std::optional<Timestamp> timestamp(const nlohmann::json* v) {
    if (!v) return std::nullopt;
    if (v->is_string()) return parse_timestamp(v->get<std::string>());
    if (v->is_number()) return from_epoch_seconds(static_cast<std::int64_t>(v->get<double>()));
    return std::nullopt;
}

}  // namespace detail

// Sets the derived fields of a record whose text is final.
inline void finalize(Record& r, double cyrillic_threshold = 0.15) {
    auto stripped = text::strip(r.text);
    r.char_len = text::codepoint_count(stripped);
    r.word_len = text::count_words(stripped);
    r.lang = text::detect_language(r.text, cyrillic_threshold);
    r.text_hash = text::fnv1a64(text::normalize_for_hash(r.text));
}

// Maps one raw platform record (or an already-unified one) onto Record.
//
// Accepted keys: id | message_id; ts | timestamp | date | created_utc (ISO-8601 or epoch
// seconds); source | channel | subreddit; event_id; text columns title, selftext, body,
// text, message (joined with '\n' in that order, empty ones skipped); views, forwards
// (Telegram); score, num_comments (Reddit); reply_to | reply_to_msg_id | parent_id.
inline std::optional<Record> normalize_record(const nlohmann::json& j, const LoadOptions& opts,
                                              LineOutcome& outcome) {
    using detail::find_any;
    outcome = LineOutcome::malformed;
    if (!j.is_object()) return std::nullopt;

    Record r;
    if (auto p = find_any(j, {"platform"}); p && p->is_string()) {
        auto parsed = parse_platform(p->get<std::string>());
        if (!parsed) return std::nullopt;
        if (opts.platform && *opts.platform != *parsed) return std::nullopt;
        r.platform = *parsed;
    } else if (opts.platform) {
        r.platform = *opts.platform;
    } else {
        return std::nullopt;
    }

    auto id = detail::scalar_string(find_any(j, {"id", "message_id"}));
    auto ts = detail::timestamp(find_any(j, {"ts", "timestamp", "date", "created_utc"}));
    auto source = detail::scalar_string(find_any(j, {"source", "channel", "subreddit"}));
    if (!source && !opts.default_source.empty()) source = opts.default_source;
    if (!id || id->empty() || !ts || !source || source->empty()) return std::nullopt;
    r.record_id = *id;
    r.timestamp = *ts;
    r.source = *source;
    r.event_id = detail::scalar_string(find_any(j, {"event_id"})).value_or(opts.default_event);

    std::string joined;
    for (const char* col : {"title", "selftext", "body", "text", "message"}) {
        auto it = j.find(col);
        if (it == j.end() || !it->is_string()) continue;
        const auto& s = it->get_ref<const std::string&>();
        if (text::strip(s).empty()) continue;
        if (!joined.empty()) joined += '\n';
        joined += s;
    }
    r.text = std::move(joined);

    if (r.platform == Platform::telegram) {
        r.views = detail::non_negative(find_any(j, {"views"}));
        r.forwards = detail::non_negative(find_any(j, {"forwards"}));
    } else {
        r.score = detail::integer(find_any(j, {"score"}));
        r.num_comments = detail::non_negative(find_any(j, {"num_comments"}));
    }
    r.reply_to = detail::scalar_string(find_any(j, {"reply_to", "reply_to_msg_id", "parent_id"}));

    if (r.text.empty()) {
        outcome = LineOutcome::dropped_empty;
        return std::nullopt;
    }
    finalize(r, opts.cyrillic_threshold);
    if (r.char_len < opts.min_text_chars) {
        outcome = LineOutcome::dropped_short;
        return std::nullopt;
    }
    outcome = LineOutcome::loaded;
    return r;
}

// Reads JSONL. Bad lines are counted, never fatal. Duplicate API records
// (same platform, source and id) keep their first occurrence.
inline std::vector<Record> load_stream(std::istream& in, const LoadOptions& opts,
                                       LoadStats& stats) {
    std::vector<Record> out;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (text::strip(line).empty()) continue;
        ++stats.lines;
        auto j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded()) {
            ++stats.malformed;
            continue;
        }
        LineOutcome outcome;
        auto rec = normalize_record(j, opts, outcome);
        switch (outcome) {
            case LineOutcome::loaded: out.push_back(std::move(*rec)); break;
            case LineOutcome::malformed: ++stats.malformed; break;
            case LineOutcome::dropped_empty: ++stats.dropped_empty; break;
            case LineOutcome::dropped_short: ++stats.dropped_short; break;
        }
    }
    return out;
}

// Removes repeated (platform, source, id) records, keeping the first.
inline std::vector<Record> dedupe_api_records(std::vector<Record> records,
                                              std::size_t* removed = nullptr) {
    std::unordered_set<std::string> seen;
    std::vector<Record> out;
    out.reserve(records.size());
    for (auto& r : records)
        if (seen.insert(r.key()).second) out.push_back(std::move(r));
    if (removed) *removed = records.size() - out.size();
    return out;
}

inline std::vector<Record> load_corpus(const std::vector<std::string>& paths,
                                       const LoadOptions& opts, LoadStats& stats) {
    std::vector<Record> all;
    for (const auto& path : paths) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw InputError("cannot read corpus file '" + path + "'");
        LoadStats file_stats;
        auto recs = load_stream(in, opts, file_stats);
        if (in.bad()) throw InputError("read error in corpus file '" + path + "'");
        stats += file_stats;
        all.insert(all.end(), std::make_move_iterator(recs.begin()),
                   std::make_move_iterator(recs.end()));
    }
    std::size_t removed = 0;
    all = dedupe_api_records(std::move(all), &removed);
    stats.duplicate_api += removed;
    stats.loaded = all.size();
    return all;
}

// Orders records by timestamp, then by identity so that ties are permutation-independent.
inline bool chronological(const Record& a, const Record& b) {
    if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
    return std::tie(a.platform, a.source, a.record_id) < std::tie(b.platform, b.source, b.record_id);
}

// Flags every record whose normalized text hash already occurred earlier (in time
// order) within the same (event, platform, source). Input order is preserved.
inline std::vector<Record> flag_duplicates(std::vector<Record> records) {
    std::vector<std::size_t> order(records.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return chronological(records[a], records[b]); });
    std::set<std::tuple<std::string, Platform, std::string, std::uint64_t>> seen;
    for (auto i : order) {
        auto& r = records[i];
        r.dup_flag = !seen.emplace(r.event_id, r.platform, r.source, r.text_hash).second;
    }
    return records;
}

inline bool matches_keywords(const Record& r, const EventWindow& w) {
    if (w.keywords.empty()) return true;
    auto lowered = text::to_lower(r.text);
    return std::any_of(w.keywords.begin(), w.keywords.end(), [&](const std::string& k) {
        return lowered.find(k) != std::string::npos;
    });
}

// Time filter. acute = [t0, t0+14d], pre = [start, t0), post = (t0+14d, end].
inline bool in_period(Timestamp t, const EventWindow& w, PeriodLabel period) {
    if (t < w.start_instant() || t >= w.end_exclusive()) return false;
    if (period == PeriodLabel::full) return true;
    if (!w.t0) throw ConfigError("window has no anchor");
    const Timestamp acute_start{*w.t0};
    const Timestamp acute_end = acute_start + std::chrono::days{14};
    switch (period) {
        case PeriodLabel::pre: return t < acute_start;
        case PeriodLabel::acute: return t >= acute_start && t <= acute_end;
        case PeriodLabel::post: return t > acute_end;
        case PeriodLabel::full: return true;
    }
    return false;
}

using SliceMap = std::map<SliceKey, SourceSlice>;

// Keyword filter, then the period's time filter, then grouping per (platform, source).
// Only records tagged with this window's event_id take part.
inline SliceMap slice(const std::vector<Record>& records, const EventWindow& window,
                      PeriodLabel period) {
    if (period != PeriodLabel::full && !window.t0) throw ConfigError("window has no anchor");
    SliceMap slices;
    for (const auto& r : records) {
        if (r.event_id != window.event_id) continue;
        if (!matches_keywords(r, window)) continue;
        if (!in_period(r.timestamp, window, period)) continue;
        auto& s = slices[SliceKey{r.platform, r.source}];
        if (s.records.empty()) {
            s.event_id = window.event_id;
            s.platform = r.platform;
            s.source = r.source;
        }
        s.records.push_back(r);
    }
    for (auto& [_, s] : slices) std::sort(s.records.begin(), s.records.end(), chronological);
    return slices;
}

// Unified output schema.
inline nlohmann::json to_json(const Record& r) {
    nlohmann::json j;
    j["platform"] = std::string(to_string(r.platform));
    j["event_id"] = r.event_id;
    j["source"] = r.source;
    j["id"] = r.record_id;
    j["ts"] = format_timestamp(r.timestamp);
    j["text"] = r.text;
    auto opt = [](const std::optional<std::int64_t>& v) {
        return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
    };
    j["views"] = opt(r.views);
    j["forwards"] = opt(r.forwards);
    j["score"] = opt(r.score);
    j["num_comments"] = opt(r.num_comments);
    j["reply_to"] = r.reply_to ? nlohmann::json(*r.reply_to) : nlohmann::json(nullptr);
    j["lang"] = std::string(to_string(r.lang));
    j["dup_flag"] = r.dup_flag;
    j["text_hash"] = r.text_hash;
    j["char_len"] = r.char_len;
    j["word_len"] = r.word_len;
    return j;
}

// Fraction of records tagged ru.
inline double ru_fraction(const std::vector<Record>& records) {
    if (records.empty()) return 0.0;
    auto ru = std::count_if(records.begin(), records.end(),
                            [](const Record& r) { return r.lang == Lang::ru; });
    return static_cast<double>(ru) / static_cast<double>(records.size());
}

inline Lang lang_majority(const SourceSlice& s) {
    return ru_fraction(s.records) > 0.5 ? Lang::ru : Lang::en_or_unknown;
}

}  // namespace snc::corpus
