#pragma once

// Composite coordination score: per-event min-max normalization of the four raw
// components and their signed weighted combination, then ranking.

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "snc/config.hpp"
#include "snc/types.hpp"

namespace snc::composite {

// (x - min) / (max - min); every value maps to 0 when max == min.
template <class Key>
std::map<Key, double> minmax_normalize(const std::map<Key, double>& values) {
    std::map<Key, double> out;
    if (values.empty()) return out;
    auto [lo, hi] = std::minmax_element(values.begin(), values.end(),
                                        [](const auto& a, const auto& b) { return a.second < b.second; });
    const double min = lo->second;
    const double range = hi->second - min;
    for (const auto& [k, v] : values) out.emplace(k, range > 0.0 ? (v - min) / range : 0.0);
    return out;
}

struct ComponentVector {
    std::optional<double> h;  // semantic homogenization
    std::optional<double> b;  // burstiness
    std::optional<double> r;  // rhetorical repetition
    std::optional<double> d;  // lexical diversity (MATTR)

    bool any() const { return h || b || r || d; }

    // Letters of the present components, e.g. "HBD".
    std::string present() const {
        std::string s;
        if (h) s += 'H';
        if (b) s += 'B';
        if (r) s += 'R';
        if (d) s += 'D';
        return s;
    }
};

// SNC = (sum of present signed weighted terms) * (sum of all weights) / (sum of present
// weights). D enters negatively. Missing when no component is present.
inline std::optional<double> snc_score(const ComponentVector& hat, const Weights& w = {}) {
    double signed_sum = 0.0;
    double present = 0.0;
    if (hat.h) { signed_sum += w.h * *hat.h; present += w.h; }
    if (hat.b) { signed_sum += w.b * *hat.b; present += w.b; }
    if (hat.r) { signed_sum += w.r * *hat.r; present += w.r; }
    if (hat.d) { signed_sum -= w.d * *hat.d; present += w.d; }
    if (!hat.any()) return std::nullopt;
    if (present == 0.0) return 0.0;
    return signed_sum * (w.total() / present);
}

// Weight each component effectively carries after rescaling; sums to the total mass.
inline Weights effective_weights(const ComponentVector& hat, const Weights& w = {}) {
    double present = (hat.h ? w.h : 0.0) + (hat.b ? w.b : 0.0) + (hat.r ? w.r : 0.0) +
                     (hat.d ? w.d : 0.0);
    const double scale = present > 0.0 ? w.total() / present : 0.0;
    return {hat.h ? w.h * scale : 0.0, hat.b ? w.b * scale : 0.0, hat.r ? w.r * scale : 0.0,
            hat.d ? w.d * scale : 0.0};
}

struct SncInput {
    Platform platform = Platform::telegram;
    std::string source;
    ComponentVector raw;
};

struct SncRow {
    std::string event_id;
    Platform platform = Platform::telegram;
    std::string source;
    ComponentVector raw;
    ComponentVector hat;
    double snc = 0.0;
    std::size_t rank = 0;
    bool tied = false;  // equal score to a neighbour; order decided by name
    Weights weights_used{0, 0, 0, 0};
};

// Descending score, ties broken by source then platform; ranks are 1..n.
inline std::vector<SncRow> rank_event(std::vector<SncRow> rows) {
    std::sort(rows.begin(), rows.end(), [](const SncRow& a, const SncRow& b) {
        if (a.snc != b.snc) return a.snc > b.snc;
        if (a.source != b.source) return a.source < b.source;
        return a.platform < b.platform;
    });
    for (std::size_t i = 0; i < rows.size(); ++i) {
        rows[i].rank = i + 1;
        rows[i].tied = (i > 0 && rows[i - 1].snc == rows[i].snc) ||
                       (i + 1 < rows.size() && rows[i + 1].snc == rows[i].snc);
    }
    return rows;
}

struct EventScores {
    std::vector<SncRow> ranked;
    std::vector<SncInput> excluded;  // no component available
};

// Normalizes each component within the event (jointly or per platform), scores and ranks.
inline EventScores score_event(const std::string& event_id, const std::vector<SncInput>& inputs,
                               const Weights& weights = {},
                               NormalizationPool pool = NormalizationPool::joint) {
    using Key = std::pair<Platform, std::string>;
    std::vector<SncRow> rows;
    EventScores out;
    for (const auto& in : inputs) {
        if (!in.raw.any()) {
            out.excluded.push_back(in);
            continue;
        }
        SncRow row;
        row.event_id = event_id;
        row.platform = in.platform;
        row.source = in.source;
        row.raw = in.raw;
        rows.push_back(std::move(row));
    }

    auto normalize = [&](std::optional<double> ComponentVector::*field) {
        std::map<int, std::map<Key, double>> pools;
        for (const auto& r : rows)
            if (const auto& v = r.raw.*field) {
                int pool_id = pool == NormalizationPool::joint ? 0 : static_cast<int>(r.platform);
                pools[pool_id][{r.platform, r.source}] = *v;
            }
        std::map<Key, double> hat;
        for (const auto& [_, values] : pools) hat.merge(minmax_normalize(values));
        for (auto& r : rows) {
            auto it = hat.find({r.platform, r.source});
            if (it != hat.end()) r.hat.*field = it->second;
        }
    };
    normalize(&ComponentVector::h);
    normalize(&ComponentVector::b);
    normalize(&ComponentVector::r);
    normalize(&ComponentVector::d);

    for (auto& r : rows) {
        r.snc = *snc_score(r.hat, weights);
        r.weights_used = effective_weights(r.hat, weights);
    }
    out.ranked = rank_event(std::move(rows));
    return out;
}

}  // namespace snc::composite
