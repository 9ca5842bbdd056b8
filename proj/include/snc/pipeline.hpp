#pragma once

// End-to-end orchestration: load -> slice -> metric modules -> composite -> emission.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <iostream>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "snc/composite.hpp"
#include "snc/config.hpp"
#include "snc/corpus.hpp"
#include "snc/csv.hpp"
#include "snc/lexical.hpp"
#include "snc/report.hpp"
#include "snc/rhetoric.hpp"
#include "snc/semantic.hpp"
#include "snc/temporal.hpp"

namespace snc::pipeline {

inline constexpr std::string_view kToolVersion = "0.1.0";

enum class Stage { ingest, metrics, snc, report, all };

struct Modules {
    bool lexical = true;
    bool temporal = true;
    bool rhetoric = true;
    bool semantic = true;

    // Names: lexical, temporal, rhetoric, semantic.
    bool skip(std::string_view name) {
        if (name == "lexical") lexical = false;
        else if (name == "temporal") temporal = false;
        else if (name == "rhetoric") rhetoric = false;
        else if (name == "semantic") semantic = false;
        else return false;
        return true;
    }
};

struct SliceMetrics {
    SliceKey key;
    std::size_t records = 0;
    Lang lang_majority = Lang::en_or_unknown;
    lexical::LexicalScore lexical;
    temporal::TemporalScore temporal;
    std::optional<double> r_score;
    double near_dup_rate = 0.0;
    semantic::SemanticScore semantic;
};

struct PlatformGroup {
    Platform platform = Platform::telegram;
    std::vector<SliceKey> sources;
    std::optional<temporal::CoActivitySeries> coactivity;
    std::optional<temporal::OverlapMatrix> hourly;
    std::vector<rhetoric::TrigramProfile> profiles;
    std::vector<std::vector<double>> trigram_jaccard;
    std::vector<rhetoric::SharedItem> hashtags;
    std::vector<rhetoric::SharedItem> domains;
    std::vector<rhetoric::SharedTrigram> shared_trigrams;
    std::optional<std::vector<std::vector<std::optional<double>>>> semantic_cross;
};

struct EventAnalysis {
    const EventWindow* window = nullptr;
    PeriodLabel period = PeriodLabel::full;
    corpus::SliceMap slices;
    std::vector<SliceMetrics> metrics;  // slice-map order
    std::vector<PlatformGroup> groups;
    composite::EventScores scores;
};

namespace detail {

// Runs fn(i) for i in [0, n) on up to hardware_concurrency threads.
template <class Fn>
void parallel_for(std::size_t n, Fn fn) {
    const std::size_t workers =
        std::min<std::size_t>(n, std::max(1u, std::thread::hardware_concurrency()));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mu;
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(error_mu);
                    if (!error) error = std::current_exception();
                }
            }
        });
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace detail

inline EventAnalysis analyze_event(const std::vector<Record>& records, const EventWindow& window,
                                   PeriodLabel period, const Config& config,
                                   const semantic::EmbeddingStore* store, const Modules& modules) {
    EventAnalysis ev;
    ev.window = &window;
    ev.period = period;
    ev.slices = corpus::slice(records, window, period);

    std::vector<const SourceSlice*> order;
    for (const auto& [_, s] : ev.slices) order.push_back(&s);
    ev.metrics.resize(order.size());
    std::vector<rhetoric::TrigramProfile> profiles(order.size());

    detail::parallel_for(order.size(), [&](std::size_t i) {
        const auto& s = *order[i];
        auto& m = ev.metrics[i];
        m.key = s.key();
        m.records = s.records.size();
        m.lang_majority = corpus::lang_majority(s);
        if (modules.lexical) m.lexical = lexical::lexical_score(s, config.mattr_window);
        if (modules.temporal) m.temporal = temporal::burstiness(s);
        if (modules.rhetoric) {
            m.near_dup_rate = rhetoric::near_dup_rate(s);
            profiles[i] = rhetoric::trigram_profile(s, config.top_trigrams);
        }
        if (modules.semantic && store)
            m.semantic = semantic::h_score(s, *store, config.seed, config.semantic_cap);
    });

    for (auto platform : {Platform::telegram, Platform::reddit}) {
        PlatformGroup g;
        g.platform = platform;
        std::vector<const SourceSlice*> slices;
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < order.size(); ++i)
            if (order[i]->platform == platform) {
                slices.push_back(order[i]);
                idx.push_back(i);
                g.sources.push_back(order[i]->key());
            }
        if (slices.empty()) continue;
        if (modules.temporal) {
            g.coactivity = temporal::coactivity(slices, &window,
                                                std::chrono::hours{config.coactivity_bin_hours});
            g.hourly = temporal::hourly_overlap(slices);
        }
        if (modules.rhetoric) {
            for (auto i : idx) g.profiles.push_back(profiles[i]);
            g.trigram_jaccard = rhetoric::jaccard_matrix(g.profiles);
            g.hashtags = rhetoric::shared_hashtags(slices);
            g.domains = rhetoric::shared_domains(slices);
            g.shared_trigrams = rhetoric::shared_trigrams(g.profiles);
            // Peer trigram overlap is a Telegram channel signal.
            if (platform == Platform::telegram)
                for (std::size_t k = 0; k < idx.size(); ++k)
                    ev.metrics[idx[k]].r_score = rhetoric::r_score(g.profiles, k);
        }
        if (modules.semantic && store)
            g.semantic_cross =
                semantic::cross_source_matrix(slices, *store, config.seed, config.semantic_cap);
        ev.groups.push_back(std::move(g));
    }

    std::vector<composite::SncInput> inputs;
    for (const auto& m : ev.metrics) {
        composite::SncInput in;
        in.platform = m.key.platform;
        in.source = m.key.source;
        in.raw.h = m.semantic.h_score;
        in.raw.b = m.temporal.burstiness;
        in.raw.r = m.r_score;
        in.raw.d = m.lexical.mattr;
        inputs.push_back(std::move(in));
    }
    ev.scores = composite::score_event(window.event_id, inputs, config.weights,
                                       config.normalization_pool);
    return ev;
}

struct CorpusInput {
    std::string path;
    std::optional<Platform> platform;
};

struct Options {
    Config config;
    std::optional<std::string> config_path;
    std::vector<CorpusInput> corpus;
    std::optional<std::string> embeddings_path;
    std::string out_dir;
    std::optional<std::string> event;
    PeriodLabel period = PeriodLabel::full;
    Modules modules;
    Stage stage = Stage::all;
};

namespace emit {

namespace fs = std::filesystem;

inline std::string opt_int(const std::optional<std::int64_t>& v) {
    return v ? std::to_string(*v) : std::string();
}

inline void records_jsonl(const fs::path& dir, const std::vector<Record>& records) {
    std::ofstream out(dir / "records.jsonl", std::ios::binary);
    std::ofstream embed(dir / "embed_input.jsonl", std::ios::binary);
    if (!out || !embed) throw InputError("cannot write ingest outputs in '" + dir.string() + "'");
    for (const auto& r : records) {
        out << corpus::to_json(r).dump() << '\n';
        embed << nlohmann::json{{"id", r.key()}, {"text", r.text}}.dump() << '\n';
    }
}

inline void ingest_summary(const fs::path& dir, const corpus::LoadStats& st) {
    csv::Writer w((dir / "ingest_summary.csv").string());
    w.row({"lines", "loaded", "malformed", "dropped_empty", "dropped_short", "duplicate_api"});
    w.row({std::to_string(st.lines), std::to_string(st.loaded), std::to_string(st.malformed),
           std::to_string(st.dropped_empty), std::to_string(st.dropped_short),
           std::to_string(st.duplicate_api)});
}

inline std::string group_file(const EventAnalysis& ev, Platform p) {
    return csv::file_part(ev.window->event_id) + "__" + std::string(to_string(p)) + ".csv";
}

inline std::vector<std::string> source_header(const std::vector<SliceKey>& sources) {
    std::vector<std::string> h{"source"};
    for (const auto& k : sources) h.push_back(k.source);
    return h;
}

inline void optional_matrix(const fs::path& path, const std::vector<SliceKey>& sources,
                            const std::vector<std::vector<std::optional<double>>>& m) {
    csv::Writer w(path.string());
    w.row(source_header(sources));
    for (std::size_t i = 0; i < sources.size(); ++i) {
        std::vector<std::string> row{sources[i].source};
        for (const auto& v : m[i]) row.push_back(csv::num(v));
        w.row(row);
    }
}

inline void metrics(const fs::path& dir, const std::vector<EventAnalysis>& events,
                    const Modules& modules, bool semantic_on) {
    const auto period = events.empty() ? std::string("full")
                                       : std::string(to_string(events.front().period));
    if (modules.lexical) {
        csv::Writer w((dir / "lexical.csv").string());
        w.row({"event_id", "platform", "source", "period", "tokens", "mattr", "h_word", "h_char3",
               "lang_majority"});
        for (const auto& ev : events)
            for (const auto& m : ev.metrics)
                w.row({ev.window->event_id, std::string(to_string(m.key.platform)), m.key.source,
                       period, std::to_string(m.lexical.token_count), csv::num(m.lexical.mattr),
                       csv::num(m.lexical.h_word), csv::num(m.lexical.h_char3),
                       std::string(to_string(m.lang_majority))});
    }
    if (modules.temporal) {
        fs::create_directories(dir / "coactivity");
        fs::create_directories(dir / "hourly_overlap");
        fs::create_directories(dir / "heatmaps");
        csv::Writer w((dir / "temporal.csv").string());
        w.row({"event_id", "platform", "source", "period", "burstiness", "mean_iat_s", "n_gaps"});
        std::map<SliceKey, std::vector<double>> per_source;
        for (const auto& ev : events)
            for (const auto& m : ev.metrics) {
                w.row({ev.window->event_id, std::string(to_string(m.key.platform)), m.key.source,
                       period, csv::num(m.temporal.burstiness),
                       m.temporal.n_gaps ? csv::num(m.temporal.mean_iat_s) : std::string(),
                       std::to_string(m.temporal.n_gaps)});
                if (m.temporal.burstiness) per_source[m.key].push_back(*m.temporal.burstiness);
            }
        csv::Writer mean((dir / "burstiness_mean.csv").string());
        mean.row({"platform", "source", "events", "burstiness_unweighted_mean"});
        for (const auto& [k, v] : per_source) {
            double s = 0.0;
            for (double x : v) s += x;
            mean.row({std::string(to_string(k.platform)), k.source, std::to_string(v.size()),
                      csv::num(s / static_cast<double>(v.size()))});
        }
        csv::Writer summary((dir / "coactivity_summary.csv").string());
        summary.row({"event_id", "platform", "bin_hours", "n_sources", "bins", "mean_active",
                     "mean_all", "full_fraction"});
        for (const auto& ev : events) {
            for (const auto& g : ev.groups) {
                if (!g.coactivity) continue;
                const auto& c = *g.coactivity;
                summary.row({ev.window->event_id, std::string(to_string(g.platform)),
                             std::to_string(c.bin_width.count() / 3600), std::to_string(c.n_sources),
                             std::to_string(c.bins.size()), csv::num(c.mean_active),
                             csv::num(c.mean_all), csv::num(c.full_fraction)});
                csv::Writer series((dir / "coactivity" / group_file(ev, g.platform)).string());
                series.row({"bin_start", "active_sources"});
                for (const auto& b : c.bins)
                    series.row({format_timestamp(b.start), std::to_string(b.active_sources)});
                if (g.hourly)
                    optional_matrix(dir / "hourly_overlap" / group_file(ev, g.platform),
                                    g.hourly->sources, g.hourly->jaccard);
            }
            for (const auto& [key, s] : ev.slices) {
                auto h = temporal::posting_heatmap(s);
                auto name = csv::file_part(ev.window->event_id) + "__" +
                            std::string(to_string(key.platform)) + "__" +
                            csv::file_part(key.source) + ".csv";
                csv::Writer hw((dir / "heatmaps" / name).string());
                std::vector<std::string> header{"weekday"};
                for (int hr = 0; hr < 24; ++hr) header.push_back("h" + std::to_string(hr));
                hw.row(header);
                static constexpr const char* kDays[] = {"Mon", "Tue", "Wed", "Thu", "Fri", "Sat", "Sun"};
                for (std::size_t d = 0; d < 7; ++d) {
                    std::vector<std::string> row{kDays[d]};
                    for (double x : h[d]) row.push_back(csv::num(x));
                    hw.row(row);
                }
            }
        }
    }
    if (modules.rhetoric) {
        fs::create_directories(dir / "trigram_jaccard");
        csv::Writer w((dir / "rhetoric.csv").string());
        w.row({"event_id", "platform", "source", "period", "r_score", "near_dup_rate", "peer_count",
               "lang_majority"});
        for (const auto& ev : events) {
            std::map<Platform, std::size_t> per_platform;
            for (const auto& m : ev.metrics) ++per_platform[m.key.platform];
            for (const auto& m : ev.metrics) {
                auto peers = m.r_score ? per_platform[m.key.platform] - 1 : 0;
                w.row({ev.window->event_id, std::string(to_string(m.key.platform)), m.key.source,
                       period, csv::num(m.r_score), csv::num(m.near_dup_rate),
                       std::to_string(peers), std::string(to_string(m.lang_majority))});
            }
        }
        csv::Writer tags((dir / "shared_hashtags.csv").string());
        csv::Writer doms((dir / "shared_domains.csv").string());
        tags.row({"event_id", "platform", "hashtag", "source_count", "total_occurrences"});
        doms.row({"event_id", "platform", "domain", "source_count", "total_occurrences"});
        nlohmann::json trigrams = nlohmann::json::array();
        for (const auto& ev : events)
            for (const auto& g : ev.groups) {
                for (const auto& t : g.hashtags)
                    tags.row({ev.window->event_id, std::string(to_string(g.platform)), t.key,
                              std::to_string(t.source_count), std::to_string(t.total)});
                for (const auto& t : g.domains)
                    doms.row({ev.window->event_id, std::string(to_string(g.platform)), t.key,
                              std::to_string(t.source_count), std::to_string(t.total)});
                csv::Writer jm((dir / "trigram_jaccard" / group_file(ev, g.platform)).string());
                jm.row(source_header(g.sources));
                for (std::size_t i = 0; i < g.sources.size(); ++i) {
                    std::vector<std::string> row{g.sources[i].source};
                    for (double v : g.trigram_jaccard[i]) row.push_back(csv::num(v));
                    jm.row(row);
                }
                nlohmann::json top = nlohmann::json::array();
                for (const auto& t : g.shared_trigrams) {
                    nlohmann::json per = nlohmann::json::object();
                    for (const auto& [k, n] : t.per_source) per[k.source] = n;
                    top.push_back({{"trigram", t.trigram},
                                   {"source_count", t.source_count},
                                   {"total", t.total},
                                   {"per_source", per}});
                }
                trigrams.push_back({{"event_id", ev.window->event_id},
                                    {"platform", std::string(to_string(g.platform))},
                                    {"shared_trigrams", top}});
            }
        std::ofstream out(dir / "shared_trigrams.json", std::ios::binary);
        out << trigrams.dump(2) << '\n';
    }
    if (semantic_on) {
        fs::create_directories(dir / "semantic_cross");
        csv::Writer w((dir / "semantic.csv").string());
        w.row({"event_id", "platform", "source", "period", "h_score", "n_sampled", "seed"});
        for (const auto& ev : events) {
            for (const auto& m : ev.metrics)
                w.row({ev.window->event_id, std::string(to_string(m.key.platform)), m.key.source,
                       period, csv::num(m.semantic.h_score), std::to_string(m.semantic.n_sampled),
                       std::to_string(m.semantic.seed)});
            for (const auto& g : ev.groups)
                if (g.semantic_cross)
                    optional_matrix(dir / "semantic_cross" / group_file(ev, g.platform), g.sources,
                                    *g.semantic_cross);
        }
    }
}

inline void snc_scores(const fs::path& dir, const std::vector<EventAnalysis>& events) {
    csv::Writer w((dir / "snc_scores.csv").string());
    w.row({"event_id", "platform", "source", "H_raw", "B_raw", "R_raw", "D_raw", "H_hat", "B_hat",
           "R_hat", "D_hat", "snc", "rank", "components_present"});
    for (const auto& ev : events)
        for (const auto& r : ev.scores.ranked)
            w.row({r.event_id, std::string(to_string(r.platform)), r.source, csv::num(r.raw.h),
                   csv::num(r.raw.b), csv::num(r.raw.r), csv::num(r.raw.d), csv::num(r.hat.h),
                   csv::num(r.hat.b), csv::num(r.hat.r), csv::num(r.hat.d), csv::num(r.snc),
                   std::to_string(r.rank), r.raw.present()});
}

inline void descriptive(const fs::path& dir, const std::vector<EventAnalysis>& events) {
    fs::create_directories(dir / "ecdf");
    std::vector<Record> analysed;
    std::vector<EventWindow> windows;
    std::vector<report::LanguageRow> lang;
    for (const auto& ev : events) {
        windows.push_back(*ev.window);
        for (const auto& [_, s] : ev.slices) analysed.insert(analysed.end(), s.records.begin(), s.records.end());
        auto rows = report::language_composition(ev.slices);
        lang.insert(lang.end(), rows.begin(), rows.end());
    }
    {
        csv::Writer w((dir / "volume_summary.csv").string());
        w.row({"event_id", "platform", "records", "sources", "span_days", "avg_per_day"});
        for (const auto& v : report::volume_summary(analysed, windows))
            w.row({v.event_id, std::string(to_string(v.platform)), std::to_string(v.records),
                   std::to_string(v.sources), std::to_string(v.span_days), csv::num(v.avg_per_day)});
    }
    {
        csv::Writer w((dir / "language_composition.csv").string());
        w.row({"event_id", "platform", "source", "records", "ru", "ru_fraction"});
        for (const auto& r : lang)
            w.row({r.event_id, std::string(to_string(r.platform)), r.source,
                   std::to_string(r.records), std::to_string(r.ru), csv::num(r.ru_fraction)});
    }
    csv::Writer pct((dir / "ecdf_percentiles.csv").string());
    pct.row({"event_id", "platform", "metric", "n", "p25", "p50", "p75", "p95"});
    for (const auto& ev : events) {
        for (auto platform : {Platform::telegram, Platform::reddit}) {
            std::map<std::string, std::vector<double>> series;
            std::vector<const Record*> recs;
            std::map<std::string, std::size_t> per_source;
            for (const auto& [key, s] : ev.slices) {
                if (key.platform != platform) continue;
                for (double g : temporal::gaps_seconds(s)) series["iat_s"].push_back(g);
                for (const auto& r : s.records) {
                    recs.push_back(&r);
                    ++per_source[r.source];
                    series["char_len"].push_back(static_cast<double>(r.char_len));
                    series["word_len"].push_back(static_cast<double>(r.word_len));
                    if (r.views) series["views"].push_back(static_cast<double>(*r.views));
                    if (r.forwards) series["forwards"].push_back(static_cast<double>(*r.forwards));
                    if (r.score) series["score"].push_back(static_cast<double>(*r.score));
                    if (r.num_comments) series["num_comments"].push_back(static_cast<double>(*r.num_comments));
                }
            }
            if (recs.empty()) continue;
            series["daily_volume"] = report::daily_volume(recs);
            for (const auto& [_, n] : per_source)
                series["source_share"].push_back(static_cast<double>(n) / static_cast<double>(recs.size()));
            for (auto& [metric, values] : series) {
                auto t = report::ecdf(values, metric);
                if (!t) continue;
                pct.row({ev.window->event_id, std::string(to_string(platform)), metric,
                         std::to_string(t->n), csv::num(t->p25()), csv::num(t->p50()),
                         csv::num(t->p75()), csv::num(t->p95())});
                auto name = csv::file_part(ev.window->event_id) + "__" +
                            std::string(to_string(platform)) + "__" + metric + ".csv";
                csv::Writer w((dir / "ecdf" / name).string());
                w.row({"value", "cum_fraction"});
                for (const auto& p : t->points) w.row({csv::num(p.value), csv::num(p.cum_fraction)});
            }
        }
    }
}

inline std::string hex64(std::uint64_t v) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

inline std::string utc_now() {
    return format_timestamp(std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now()));
}

}  // namespace emit

inline std::string_view to_string(Stage s) {
    switch (s) {
        case Stage::ingest: return "ingest";
        case Stage::metrics: return "metrics";
        case Stage::snc: return "snc";
        case Stage::report: return "report";
        case Stage::all: return "all";
    }
    return "all";
}

// Executes the requested stage and writes its artifacts plus manifest.json into
// out_dir. Throws InputError / ConfigError; run_pipeline maps them to exit codes.
inline void execute(const Options& opt) {
    namespace fs = std::filesystem;
    const bool wants_metrics =
        opt.stage == Stage::metrics || opt.stage == Stage::snc || opt.stage == Stage::all;
    const bool semantic_on = wants_metrics && opt.modules.semantic;
    if (semantic_on && !opt.embeddings_path) throw InputError("embeddings required");
    if (opt.corpus.empty()) throw InputError("no corpus files given");

    std::vector<const EventWindow*> windows;
    if (opt.event) {
        const auto* w = opt.config.find_event(*opt.event);
        if (!w) throw ConfigError("unknown event '" + *opt.event + "'");
        windows.push_back(w);
    } else {
        for (const auto& w : opt.config.events) windows.push_back(&w);
    }
    if (opt.period != PeriodLabel::full)
        for (const auto* w : windows)
            if (!w->t0) throw ConfigError("window has no anchor: " + w->event_id);

    corpus::LoadStats stats;
    std::vector<Record> records;
    nlohmann::json inputs = nlohmann::json::array();
    for (const auto& in : opt.corpus) {
        corpus::LoadOptions lo;
        lo.platform = in.platform;
        lo.min_text_chars = opt.config.min_text_chars;
        lo.cyrillic_threshold = opt.config.cyrillic_threshold;
        auto recs = corpus::load_corpus({in.path}, lo, stats);
        records.insert(records.end(), std::make_move_iterator(recs.begin()),
                       std::make_move_iterator(recs.end()));
        inputs.push_back({{"path", in.path}, {"fnv1a64", emit::hex64(text::fnv1a64(read_file(in.path)))}});
    }
    {
        std::size_t removed = 0;
        records = corpus::dedupe_api_records(std::move(records), &removed);
        stats.duplicate_api += removed;
        stats.loaded = records.size();
    }
    records = corpus::flag_duplicates(std::move(records));
    std::sort(records.begin(), records.end(), corpus::chronological);

    std::optional<semantic::EmbeddingStore> store;
    if (semantic_on) {
        store = semantic::load_embeddings(*opt.embeddings_path);
        inputs.push_back({{"path", *opt.embeddings_path},
                          {"fnv1a64", emit::hex64(text::fnv1a64(read_file(*opt.embeddings_path)))}});
    }

    fs::create_directories(opt.out_dir);
    const fs::path dir(opt.out_dir);

    if (opt.stage == Stage::ingest || opt.stage == Stage::all) {
        emit::records_jsonl(dir, records);
        emit::ingest_summary(dir, stats);
    }

    std::vector<EventAnalysis> events;
    if (opt.stage != Stage::ingest) {
        Modules modules = opt.modules;
        if (!wants_metrics) modules = Modules{false, false, false, false};
        for (const auto* w : windows)
            events.push_back(analyze_event(records, *w, opt.period, opt.config,
                                           store ? &*store : nullptr, modules));
    }
    if (wants_metrics) emit::metrics(dir, events, opt.modules, semantic_on);
    if (opt.stage == Stage::snc || opt.stage == Stage::all) emit::snc_scores(dir, events);
    if (opt.stage == Stage::report || opt.stage == Stage::all) emit::descriptive(dir, events);

    nlohmann::json skipped = nlohmann::json::array();
    if (!opt.modules.lexical) skipped.push_back("lexical");
    if (!opt.modules.temporal) skipped.push_back("temporal");
    if (!opt.modules.rhetoric) skipped.push_back("rhetoric");
    if (!opt.modules.semantic) skipped.push_back("semantic");
    nlohmann::json excluded = nlohmann::json::array();
    if (opt.stage == Stage::snc || opt.stage == Stage::all)
        for (const auto& ev : events)
            for (const auto& x : ev.scores.excluded)
                excluded.push_back({{"event_id", ev.window->event_id},
                                {"platform", std::string(to_string(x.platform))},
                                {"source", x.source}});
    auto cfg = to_json(opt.config);
    nlohmann::json manifest{
        {"tool_version", std::string(kToolVersion)},
        {"created_at", emit::utc_now()},
        {"command", std::string(to_string(opt.stage))},
        {"period", std::string(to_string(opt.period))},
        {"event", opt.event ? nlohmann::json(*opt.event) : nlohmann::json(nullptr)},
        {"seed", opt.config.seed},
        {"config_hash", emit::hex64(text::fnv1a64(cfg.dump()))},
        {"config", cfg},
        {"hash_algorithm", opt.config.hash_algorithm},
        {"inputs", inputs},
        {"skipped_modules", skipped},
        {"ingest",
         {{"lines", stats.lines},
          {"loaded", stats.loaded},
          {"malformed", stats.malformed},
          {"dropped_empty", stats.dropped_empty},
          {"dropped_short", stats.dropped_short},
          {"duplicate_api", stats.duplicate_api}}},
        {"unscored_rows", excluded}};
    std::ofstream out(dir / "manifest.json", std::ios::binary);
    out << manifest.dump(2) << '\n';
    if (!out) throw InputError("cannot write manifest in '" + opt.out_dir + "'");
}

// 0 success, 1 fatal input error, 2 config error. Errors go to `err` as one JSON line.
inline int run_pipeline(const Options& opt, std::ostream& err = std::cerr) {
    auto report_error = [&](const char* kind, const std::string& msg, int code) {
        err << nlohmann::json{{"status", "error"}, {"kind", kind}, {"message", msg}, {"exit_code", code}}.dump()
            << '\n';
        return code;
    };
    try {
        execute(opt);
        return 0;
    } catch (const ConfigError& e) {
        return report_error("config", e.what(), 2);
    } catch (const InputError& e) {
        return report_error("input", e.what(), 1);
    } catch (const std::filesystem::filesystem_error& e) {
        return report_error("input", e.what(), 1);
    }
}

}  // namespace snc::pipeline
