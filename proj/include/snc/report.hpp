#pragma once

// Descriptive statistics: ECDFs with type-1 percentiles, volume summaries and
// language composition.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "snc/corpus.hpp"
#include "snc/types.hpp"

namespace snc::report {

struct EcdfPoint {
    double value = 0.0;
    double cum_fraction = 0.0;
};

struct EcdfTable {
    std::string metric_name;
    std::size_t n = 0;
    std::vector<EcdfPoint> points;  // one per distinct value, ascending
    std::vector<double> sorted;

    // Smallest value whose cumulative fraction reaches p / 100 (inverse ECDF).
    double percentile(double p) const {
        // smallest k with k / n >= p / 100, i.e. 100 k >= p n
        const double target = std::clamp(p, 0.0, 100.0) * static_cast<double>(n);
        auto k = static_cast<std::size_t>(std::ceil(target / 100.0));
        while (k > 1 && static_cast<double>(k - 1) * 100.0 >= target) --k;
        while (k < n && static_cast<double>(k) * 100.0 < target) ++k;
        k = std::clamp<std::size_t>(k, 1, n);
        return sorted[k - 1];
    }

    double p25() const { return percentile(25); }
    double p50() const { return percentile(50); }
    double p75() const { return percentile(75); }
    double p95() const { return percentile(95); }
};

inline std::optional<EcdfTable> ecdf(std::vector<double> values, std::string metric = {}) {
    if (values.empty()) return std::nullopt;
    EcdfTable t;
    t.metric_name = std::move(metric);
    std::sort(values.begin(), values.end());
    t.n = values.size();
    const auto n = static_cast<double>(t.n);
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i + 1 < values.size() && values[i + 1] == values[i]) continue;
        t.points.push_back({values[i], static_cast<double>(i + 1) / n});
    }
    t.sorted = std::move(values);
    return t;
}

struct VolumeSummary {
    std::string event_id;
    Platform platform = Platform::telegram;
    std::size_t records = 0;
    std::size_t sources = 0;
    std::int64_t span_days = 0;  // calendar days between first and last record, at least 1
    double avg_per_day = 0.0;
};

// Per (event, platform); events or platforms without records are omitted.
inline std::vector<VolumeSummary> volume_summary(const std::vector<Record>& records,
                                                 const std::vector<EventWindow>& windows) {
    using namespace std::chrono;
    std::vector<VolumeSummary> out;
    for (const auto& w : windows) {
        for (auto platform : {Platform::telegram, Platform::reddit}) {
            VolumeSummary v;
            v.event_id = w.event_id;
            v.platform = platform;
            std::set<std::string> sources;
            std::optional<Timestamp> first, last;
            for (const auto& r : records) {
                if (r.event_id != w.event_id || r.platform != platform) continue;
                ++v.records;
                sources.insert(r.source);
                first = first ? std::min(*first, r.timestamp) : r.timestamp;
                last = last ? std::max(*last, r.timestamp) : r.timestamp;
            }
            if (v.records == 0) continue;
            v.sources = sources.size();
            v.span_days = std::max<std::int64_t>(
                1, (floor<days>(*last) - floor<days>(*first)).count());
            v.avg_per_day = static_cast<double>(v.records) / static_cast<double>(v.span_days);
            out.push_back(std::move(v));
        }
    }
    return out;
}

struct LanguageRow {
    std::string event_id;
    Platform platform = Platform::telegram;
    std::string source;  // "*" for the per-platform aggregate
    std::size_t records = 0;
    std::size_t ru = 0;
    double ru_fraction = 0.0;
};

// One row per slice, then one aggregate row per platform.
inline std::vector<LanguageRow> language_composition(const corpus::SliceMap& slices) {
    std::vector<LanguageRow> out;
    std::map<Platform, LanguageRow> agg;
    for (const auto& [key, s] : slices) {
        LanguageRow row{s.event_id, s.platform, s.source, s.records.size(), 0, 0.0};
        for (const auto& r : s.records)
            if (r.lang == Lang::ru) ++row.ru;
        if (row.records) row.ru_fraction = static_cast<double>(row.ru) / static_cast<double>(row.records);
        auto& a = agg[s.platform];
        a.event_id = s.event_id;
        a.platform = s.platform;
        a.source = "*";
        a.records += row.records;
        a.ru += row.ru;
        out.push_back(std::move(row));
    }
    for (auto& [_, a] : agg) {
        if (a.records) a.ru_fraction = static_cast<double>(a.ru) / static_cast<double>(a.records);
        out.push_back(a);
    }
    return out;
}

// Messages per UTC day from the first to the last record's day, zero days included.
inline std::vector<double> daily_volume(const std::vector<const Record*>& records) {
    using namespace std::chrono;
    if (records.empty()) return {};
    std::map<std::int64_t, std::size_t> per_day;
    for (const auto* r : records) ++per_day[floor<days>(r->timestamp).time_since_epoch().count()];
    std::vector<double> out;
    for (auto d = per_day.begin()->first; d <= per_day.rbegin()->first; ++d) {
        auto it = per_day.find(d);
        out.push_back(it == per_day.end() ? 0.0 : static_cast<double>(it->second));
    }
    return out;
}

}  // namespace snc::report
