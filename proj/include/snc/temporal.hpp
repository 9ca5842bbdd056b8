#pragma once

// Temporal coordination signals: burstiness, cross-source co-activity, hourly overlap
// and posting-hour heatmaps.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "snc/types.hpp"

namespace snc::temporal {

struct TemporalScore {
    std::optional<double> burstiness;  // in [-1, 1]
    double mean_iat_s = 0.0;
    std::size_t n_gaps = 0;
};

namespace detail {

inline double as_seconds(Timestamp t) { return static_cast<double>(t.time_since_epoch().count()); }

template <class T>
    requires std::is_arithmetic_v<T>
double as_seconds(T t) { return static_cast<double>(t); }

template <class T>
double gap(const T& later, const T& earlier) {
    if constexpr (std::is_same_v<T, Timestamp>)
        return static_cast<double>((later - earlier).count());
    else
        return static_cast<double>(later - earlier);
}

}  // namespace detail

inline std::vector<double> gaps_seconds(const SourceSlice& s) {
    std::vector<double> g;
    for (std::size_t i = 1; i < s.records.size(); ++i)
        g.push_back(detail::gap(s.records[i].timestamp, s.records[i - 1].timestamp));
    return g;
}

// B = (sigma - mu) / (sigma + mu) over the gaps, with the population standard deviation.
inline TemporalScore burstiness_from_gaps(std::span<const double> gaps) {
    TemporalScore out;
    out.n_gaps = gaps.size();
    if (gaps.empty()) return out;
    double sum = 0.0;
    for (double g : gaps) sum += g;
    const double mu = sum / static_cast<double>(gaps.size());
    out.mean_iat_s = mu;
    if (gaps.size() < 2 || !(mu > 0.0)) return out;
    double ss = 0.0;
    for (double g : gaps) ss += (g - mu) * (g - mu);
    const double sigma = std::sqrt(ss / static_cast<double>(gaps.size()));
    out.burstiness = (sigma - mu) / (sigma + mu);
    return out;
}

// Timestamps must be sorted ascending; at least three are needed for a value.
template <class T>
TemporalScore burstiness(std::span<const T> timestamps) {
    std::vector<double> gaps;
    gaps.reserve(timestamps.size());
    for (std::size_t i = 1; i < timestamps.size(); ++i)
        gaps.push_back(detail::gap(timestamps[i], timestamps[i - 1]));
    return burstiness_from_gaps(gaps);
}

template <class T>
TemporalScore burstiness(const std::vector<T>& timestamps) {
    return burstiness(std::span<const T>(timestamps));
}

inline TemporalScore burstiness(const SourceSlice& s) {
    auto g = gaps_seconds(s);
    return burstiness_from_gaps(g);
}

struct CoActivityBin {
    Timestamp start{};
    std::size_t active_sources = 0;
};

struct CoActivitySeries {
    std::chrono::seconds bin_width{std::chrono::hours{6}};
    std::size_t n_sources = 0;
    std::vector<CoActivityBin> bins;
    double mean_active = 0.0;    // mean count over bins with at least one source
    double mean_all = 0.0;       // mean count over every bin
    double full_fraction = 0.0;  // share of all bins where every source posted
};

namespace detail {

inline std::int64_t bin_index(Timestamp t, std::int64_t width) {
    auto s = t.time_since_epoch().count();
    return s >= 0 ? s / width : -((-s + width - 1) / width);
}

}  // namespace detail

// Distinct sources posting in each epoch-aligned bin. Bins span the window when one
// is given, otherwise the first to the last record.
inline CoActivitySeries coactivity(const std::vector<const SourceSlice*>& slices,
                                   const EventWindow* window = nullptr,
                                   std::chrono::seconds bin_width = std::chrono::hours{6}) {
    CoActivitySeries out;
    out.bin_width = bin_width;
    out.n_sources = slices.size();
    const std::int64_t width = bin_width.count();

    std::optional<std::int64_t> lo, hi;
    if (window) {
        lo = detail::bin_index(window->start_instant(), width);
        hi = detail::bin_index(window->end_exclusive() - std::chrono::seconds{1}, width);
    } else {
        for (const auto* s : slices)
            for (const auto& r : s->records) {
                auto b = detail::bin_index(r.timestamp, width);
                lo = lo ? std::min(*lo, b) : b;
                hi = hi ? std::max(*hi, b) : b;
            }
    }
    if (!lo) return out;

    const auto nbins = static_cast<std::size_t>(*hi - *lo + 1);
    std::vector<std::size_t> counts(nbins, 0);
    for (const auto* s : slices) {
        std::set<std::int64_t> active;
        for (const auto& r : s->records) {
            auto b = detail::bin_index(r.timestamp, width);
            if (b >= *lo && b <= *hi) active.insert(b);
        }
        for (auto b : active) ++counts[static_cast<std::size_t>(b - *lo)];
    }

    out.bins.reserve(nbins);
    std::size_t nonempty = 0, full = 0, total = 0;
    for (std::size_t i = 0; i < nbins; ++i) {
        out.bins.push_back(
            {Timestamp{std::chrono::seconds{(*lo + static_cast<std::int64_t>(i)) * width}}, counts[i]});
        total += counts[i];
        if (counts[i] > 0) ++nonempty;
        if (out.n_sources > 0 && counts[i] == out.n_sources) ++full;
    }
    if (nonempty > 0) out.mean_active = static_cast<double>(total) / static_cast<double>(nonempty);
    out.mean_all = static_cast<double>(total) / static_cast<double>(nbins);
    out.full_fraction = static_cast<double>(full) / static_cast<double>(nbins);
    return out;
}

struct OverlapMatrix {
    std::vector<SliceKey> sources;
    // Missing for sources without posts.
    std::vector<std::vector<std::optional<double>>> jaccard;
};

template <class T>
double jaccard(const std::set<T>& a, const std::set<T>& b) {
    if (a.empty() && b.empty()) return 0.0;
    std::size_t inter = 0;
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() && ib != b.end()) {
        if (*ia < *ib) ++ia;
        else if (*ib < *ia) ++ib;
        else {
            ++inter;
            ++ia;
            ++ib;
        }
    }
    return static_cast<double>(inter) / static_cast<double>(a.size() + b.size() - inter);
}

inline std::set<std::int64_t> active_hours(const SourceSlice& s) {
    std::set<std::int64_t> hours;
    for (const auto& r : s.records) hours.insert(detail::bin_index(r.timestamp, 3600));
    return hours;
}

// Pairwise Jaccard of the sets of active UTC hours.
inline OverlapMatrix hourly_overlap(const std::vector<const SourceSlice*>& slices) {
    OverlapMatrix m;
    std::vector<std::set<std::int64_t>> active;
    for (const auto* s : slices) {
        m.sources.push_back(s->key());
        active.push_back(active_hours(*s));
    }
    const auto n = slices.size();
    m.jaccard.assign(n, std::vector<std::optional<double>>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            if (active[i].empty() || active[j].empty()) continue;
            double v = i == j ? 1.0 : jaccard(active[i], active[j]);
            m.jaccard[i][j] = v;
            m.jaccard[j][i] = v;
        }
    return m;
}

// Rows are ISO weekdays (Monday first), columns UTC hours. Each non-empty row sums to 1.
using Heatmap = std::array<std::array<double, 24>, 7>;

inline Heatmap posting_heatmap(const SourceSlice& s) {
    using namespace std::chrono;
    std::array<std::array<std::size_t, 24>, 7> counts{};
    for (const auto& r : s.records) {
        auto day = floor<days>(r.timestamp);
        auto wd = weekday{day}.iso_encoding() - 1;
        auto hour = duration_cast<hours>(r.timestamp - day).count();
        ++counts[wd][static_cast<std::size_t>(hour)];
    }
    Heatmap h{};
    for (std::size_t d = 0; d < 7; ++d) {
        std::size_t row = 0;
        for (auto c : counts[d]) row += c;
        if (row == 0) continue;
        for (std::size_t hr = 0; hr < 24; ++hr)
            h[d][hr] = static_cast<double>(counts[d][hr]) / static_cast<double>(row);
    }
    return h;
}

}  // namespace snc::temporal
