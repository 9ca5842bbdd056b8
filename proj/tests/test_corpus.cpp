#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "snc/config.hpp"
#include "snc/corpus.hpp"
#include "support.hpp"

using namespace snc;
using snc::support::at;
using snc::support::make_record;

namespace {

std::vector<Record> load(const std::string& body, std::optional<Platform> p, corpus::LoadStats& st) {
    std::istringstream in(body);
    corpus::LoadOptions opt;
    opt.platform = p;
    opt.default_event = "ev";
    return corpus::load_stream(in, opt, st);
}

EventWindow window_with_anchor() {
    return make_window("ev", "2024-04-01", "2024-06-30", "2024-04-13", {});
}

}  // namespace

TEST(Load, TelegramFixtureLine) {
    corpus::LoadStats st;
    auto recs = load(
        R"({"id":1,"channel":"kyivindependent_official","date":"2025-06-01T12:00:00Z","text":"Strikes reported near Kharkiv overnight","views":100})"
        "\n",
        Platform::telegram, st);
    ASSERT_EQ(recs.size(), 1u);
    const auto& r = recs[0];
    EXPECT_EQ(r.word_len, 5u);
    EXPECT_EQ(r.lang, Lang::en_or_unknown);
    EXPECT_EQ(r.record_id, "1");
    EXPECT_EQ(r.source, "kyivindependent_official");
    EXPECT_EQ(r.views, 100);
    EXPECT_FALSE(r.forwards);
    EXPECT_FALSE(r.score);
    EXPECT_EQ(r.char_len, 39u);
    EXPECT_EQ(r.key(), "telegram:kyivindependent_official:1");
}

TEST(Load, DropRulesAndCounts) {
    corpus::LoadStats st;
    std::string body =
        R"({"id":1,"channel":"c","date":"2025-06-01T12:00:00Z","text":""})" "\n"
        R"({"id":2,"channel":"c","date":"2025-06-01T12:00:00Z","text":"123456789"})" "\n"
        R"({"id":3,"channel":"c","date":"2025-06-01T12:00:00Z","text":"1234567890"})" "\n"
        R"({"id":4,"channel":"c","text":"no timestamp here at all"})" "\n"
        R"({"channel":"c","date":"2025-06-01T12:00:00Z","text":"no id on this line"})" "\n"
        R"({"id":6,"date":"2025-06-01T12:00:00Z","text":"no source on this line"})" "\n"
        "{not json\n"
        "\n"
        R"({"id":8,"channel":"c","date":"2025-06-01T12:00:00Z","text":"   \n  "})" "\n";
    auto recs = load(body, Platform::telegram, st);
    ASSERT_EQ(recs.size(), 1u);
    EXPECT_EQ(recs[0].record_id, "3");
    EXPECT_EQ(st.lines, 8u);
    EXPECT_EQ(st.dropped_empty, 2u);
    EXPECT_EQ(st.dropped_short, 1u);
    EXPECT_EQ(st.malformed, 4u);
}

TEST(Load, RedditNineCharBodyDropped) {
    corpus::LoadStats st;
    auto recs = load(
        R"({"id":"c1","subreddit":"worldnews","created_utc":1748779200,"body":"too short","score":3})" "\n",
        Platform::reddit, st);
    EXPECT_TRUE(recs.empty());
    EXPECT_EQ(st.dropped_short, 1u);
}

TEST(Load, RedditPostJoinsTitleAndSelftext) {
    corpus::LoadStats st;
    auto recs = load(
        R"({"id":"p1","subreddit":"worldnews","created_utc":1748779200,"title":"Title here","selftext":"Body text","score":-4,"num_comments":12,"views":9})" "\n",
        Platform::reddit, st);
    ASSERT_EQ(recs.size(), 1u);
    EXPECT_EQ(recs[0].text, "Title here\nBody text");
    EXPECT_EQ(recs[0].score, -4);
    EXPECT_EQ(recs[0].num_comments, 12);
    EXPECT_FALSE(recs[0].views);
    EXPECT_EQ(format_timestamp(recs[0].timestamp), "2025-06-01T12:00:00Z");
}

TEST(Load, PlatformFromLineWhenUnset) {
    corpus::LoadStats st;
    auto recs = load(
        R"({"platform":"reddit","id":"x","source":"s","ts":"2025-01-01T00:00:00Z","text":"unified schema line"})" "\n"
        R"({"id":"y","source":"s","ts":"2025-01-01T00:00:00Z","text":"no platform given here"})" "\n",
        std::nullopt, st);
    ASSERT_EQ(recs.size(), 1u);
    EXPECT_EQ(recs[0].platform, Platform::reddit);
    EXPECT_EQ(st.malformed, 1u);
}

TEST(Load, UnreadableFileIsFatal) {
    corpus::LoadStats st;
    EXPECT_THROW(corpus::load_corpus({"/nonexistent/corpus.jsonl"}, {}, st), InputError);
}

TEST(Load, UnifiedOutputReloadsIdentically) {
    corpus::LoadStats st;
    std::string body =
        R"({"id":1,"channel":"a","date":"2025-06-01T12:00:00Z","text":"Первое сообщение канала","views":5,"forwards":1,"reply_to_msg_id":7})" "\n"
        R"({"id":2,"channel":"a","date":"2025-06-02T12:00:00+03:00","text":"Second message in English"})" "\n";
    auto first = load(body, Platform::telegram, st);
    std::string unified;
    for (const auto& r : first) unified += corpus::to_json(r).dump() + "\n";
    corpus::LoadStats st2;
    auto second = load(unified, std::nullopt, st2);
    ASSERT_EQ(second.size(), first.size());
    for (std::size_t i = 0; i < first.size(); ++i)
        EXPECT_EQ(corpus::to_json(first[i]).dump(), corpus::to_json(second[i]).dump());
    EXPECT_EQ(second[0].reply_to, "7");
    EXPECT_EQ(second[0].lang, Lang::ru);
}

TEST(Load, ApiDuplicatesKeepFirst) {
    auto a = make_record("s", "1", at("2025-01-01T00:00:00Z"), "first copy of the message");
    auto b = make_record("s", "1", at("2025-01-02T00:00:00Z"), "second retrieval of it");
    auto c = make_record("t", "1", at("2025-01-02T00:00:00Z"), "same id other channel");
    std::size_t removed = 0;
    auto out = corpus::dedupe_api_records({a, b, c}, &removed);
    ASSERT_EQ(out.size(), 2u);
    EXPECT_EQ(removed, 1u);
    EXPECT_EQ(out[0].text, a.text);
}

TEST(Duplicates, WithinSourceOnly) {
    auto t0 = at("2025-01-01T00:00:00Z");
    std::vector<Record> rs{
        make_record("a", "1", t0, "Same text here!"),
        make_record("a", "2", t0 + std::chrono::hours{1}, "same   TEXT here"),
        make_record("b", "1", t0 + std::chrono::hours{2}, "same text here"),
    };
    auto out = corpus::flag_duplicates(rs);
    EXPECT_FALSE(out[0].dup_flag);
    EXPECT_TRUE(out[1].dup_flag);
    EXPECT_FALSE(out[2].dup_flag);
}

TEST(Duplicates, ThreeCopiesFlagLaterOnes) {
    auto t0 = at("2025-01-01T00:00:00Z");
    // Input order differs from time order; flags follow time order.
    std::vector<Record> rs{
        make_record("a", "3", t0 + std::chrono::hours{2}, "repeat after me"),
        make_record("a", "1", t0, "repeat after me"),
        make_record("a", "2", t0 + std::chrono::hours{1}, "repeat after me"),
    };
    auto out = corpus::flag_duplicates(rs);
    std::sort(out.begin(), out.end(), corpus::chronological);
    std::vector<bool> flags;
    for (const auto& r : out) flags.push_back(r.dup_flag);
    EXPECT_EQ(flags, (std::vector<bool>{false, true, true}));
}

TEST(Slice, AcuteBoundariesAreClosed) {
    auto w = window_with_anchor();
    auto t0 = Timestamp{*w.t0};
    auto end = t0 + std::chrono::days{14};
    using corpus::in_period;
    EXPECT_TRUE(in_period(t0, w, PeriodLabel::acute));
    EXPECT_FALSE(in_period(t0, w, PeriodLabel::pre));
    EXPECT_TRUE(in_period(t0 - std::chrono::seconds{1}, w, PeriodLabel::pre));
    EXPECT_TRUE(in_period(end, w, PeriodLabel::acute));
    EXPECT_FALSE(in_period(end, w, PeriodLabel::post));
    EXPECT_TRUE(in_period(end + std::chrono::seconds{1}, w, PeriodLabel::post));
    // Window end day is inclusive.
    EXPECT_TRUE(in_period(at("2024-06-30T23:59:59Z"), w, PeriodLabel::full));
    EXPECT_FALSE(in_period(at("2024-07-01T00:00:00Z"), w, PeriodLabel::full));
    EXPECT_FALSE(in_period(at("2024-03-31T23:59:59Z"), w, PeriodLabel::pre));
}

TEST(Slice, NoAnchorIsAnError) {
    auto w = make_window("ev", "2024-04-01", "2024-06-30", std::nullopt, {});
    EXPECT_THROW(corpus::slice({}, w, PeriodLabel::acute), ConfigError);
    try {
        corpus::slice({}, w, PeriodLabel::pre);
    } catch (const ConfigError& e) {
        EXPECT_STREQ(e.what(), "window has no anchor");
    }
    EXPECT_NO_THROW(corpus::slice({}, w, PeriodLabel::full));
}

TEST(Slice, KeywordFilterAndGrouping) {
    auto w = make_window("ev", "2024-04-01", "2024-06-30", "2024-04-13", {"iran", "иран"});
    std::vector<Record> rs{
        make_record("a", "2", at("2024-04-20T00:00:00Z"), "Strike on IRAN reported"),
        make_record("a", "1", at("2024-04-14T00:00:00Z"), "Удар по Ирану подтверждён"),
        make_record("b", "1", at("2024-04-15T00:00:00Z"), "Weather is nice today"),
        make_record("c", "1", at("2024-04-15T00:00:00Z"), "iran again", Platform::reddit),
        make_record("a", "9", at("2024-04-15T00:00:00Z"), "iran but another event", Platform::telegram,
                    "other"),
    };
    auto slices = corpus::slice(rs, w, PeriodLabel::full);
    ASSERT_EQ(slices.size(), 2u);
    const auto& a = slices.at({Platform::telegram, "a"});
    ASSERT_EQ(a.records.size(), 2u);
    EXPECT_EQ(a.records[0].record_id, "1");  // chronological
    EXPECT_TRUE(slices.contains({Platform::reddit, "c"}));
    EXPECT_FALSE(slices.contains({Platform::telegram, "b"}));
}

TEST(Slice, PeriodsPartitionTheWindow) {
    auto w = window_with_anchor();
    std::mt19937_64 rng(7);
    std::vector<Record> rs;
    const auto lo = epoch_seconds(w.start_instant()) - 86400;
    const auto hi = epoch_seconds(w.end_exclusive()) + 86400;
    std::uniform_int_distribution<std::int64_t> when(lo, hi);
    for (int i = 0; i < 2000; ++i) {
        auto t = i < 4 ? std::array{Timestamp{*w.t0}, Timestamp{*w.t0} + std::chrono::days{14},
                                    w.start_instant(), w.end_exclusive() - std::chrono::seconds{1}}[i]
                       : from_epoch_seconds(when(rng));
        rs.push_back(make_record("s" + std::to_string(i % 3), std::to_string(i), t, "some message text"));
    }
    auto count = [&](PeriodLabel p) {
        std::size_t n = 0;
        for (const auto& [_, s] : corpus::slice(rs, w, p)) n += s.records.size();
        return n;
    };
    EXPECT_EQ(count(PeriodLabel::pre) + count(PeriodLabel::acute) + count(PeriodLabel::post),
              count(PeriodLabel::full));
    for (const auto& r : rs) {
        int hits = 0;
        for (auto p : {PeriodLabel::pre, PeriodLabel::acute, PeriodLabel::post})
            hits += corpus::in_period(r.timestamp, w, p);
        EXPECT_EQ(hits, corpus::in_period(r.timestamp, w, PeriodLabel::full) ? 1 : 0);
    }
}

TEST(Config, DefaultsAndOverrides) {
    auto c = default_config();
    EXPECT_EQ(c.events.size(), 6u);
    EXPECT_EQ(c.hash_algorithm, "fnv1a64");
    ASSERT_TRUE(c.find_event("iran_israel_escalation"));
    EXPECT_EQ(format_date(*c.find_event("iran_israel_escalation")->t0), "2024-04-13");

    auto j = nlohmann::json::parse(R"({
        "events": [{"event_id": "x", "start": "2025-01-01", "end": "2025-01-31",
                    "t0": "2025-01-10", "keywords": ["Kyiv"]}],
        "seed": 5, "mattr_window": 50, "normalization_pool": "per_platform",
        "weights": {"h": 0.5}})");
    auto p = parse_config(j);
    ASSERT_EQ(p.events.size(), 1u);
    EXPECT_EQ(p.events[0].keywords, std::vector<std::string>{"kyiv"});
    EXPECT_EQ(p.seed, 5u);
    EXPECT_EQ(p.mattr_window, 50u);
    EXPECT_EQ(p.normalization_pool, NormalizationPool::per_platform);
    EXPECT_DOUBLE_EQ(p.weights.total(), 1.25);

    auto round = parse_config(to_json(p));
    EXPECT_EQ(to_json(round).dump(), to_json(p).dump());
}

TEST(Config, RejectsBadValues) {
    auto bad = [](const char* s) { return parse_config(nlohmann::json::parse(s)); };
    EXPECT_THROW(bad(R"({"hash_algorithm": "md5"})"), ConfigError);
    EXPECT_THROW(bad(R"({"mattr_window": 0})"), ConfigError);
    EXPECT_THROW(bad(R"({"normalization_pool": "both"})"), ConfigError);
    EXPECT_THROW(bad(R"({"events": [{"event_id": "x", "start": "2025-02-01", "end": "2025-01-01"}]})"),
                 ConfigError);
    EXPECT_THROW(bad(R"({"events": [{"event_id": "x", "start": "2025-01-01", "end": "2025-02-01", "t0": "2026-01-01"}]})"),
                 ConfigError);
    EXPECT_THROW(bad(R"({"seed": "abc"})"), ConfigError);
    EXPECT_THROW(load_config("/nonexistent/config.json"), ConfigError);
}
