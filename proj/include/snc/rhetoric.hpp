#pragma once

// Rhetorical repetition across sources: top word-trigram overlap, near-duplicate
// rate, shared hashtags and URL domains.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "snc/lexical.hpp"
#include "snc/temporal.hpp"
#include "snc/text.hpp"
#include "snc/types.hpp"

namespace snc::rhetoric {

struct TrigramProfile {
    SliceKey source;
    std::vector<std::string> top;  // (count desc, trigram asc), at most top_k entries
    std::map<std::string, std::size_t> freq;

    std::set<std::string> top_set() const { return {top.begin(), top.end()}; }
};

// Word trigrams of one message; never crosses message boundaries.
inline std::vector<std::string> message_trigrams(std::string_view message) {
    auto tokens = lexical::tokenize(message);
    std::vector<std::string> out;
    for (std::size_t i = 0; i + 3 <= tokens.size(); ++i)
        out.push_back(tokens[i] + ' ' + tokens[i + 1] + ' ' + tokens[i + 2]);
    return out;
}

inline std::vector<std::string> top_k(const std::map<std::string, std::size_t>& freq,
                                      std::size_t k) {
    std::vector<std::pair<std::string, std::size_t>> items(freq.begin(), freq.end());
    auto cmp = [](const auto& a, const auto& b) {
        return a.second != b.second ? a.second > b.second : a.first < b.first;
    };
    const auto keep = std::min(k, items.size());
    std::partial_sort(items.begin(), items.begin() + static_cast<std::ptrdiff_t>(keep),
                      items.end(), cmp);
    std::vector<std::string> out;
    out.reserve(keep);
    for (std::size_t i = 0; i < keep; ++i) out.push_back(std::move(items[i].first));
    return out;
}

inline TrigramProfile trigram_profile(const SourceSlice& slice, std::size_t k = 100) {
    TrigramProfile p;
    p.source = slice.key();
    for (const auto& r : slice.records)
        for (auto& t : message_trigrams(r.text)) ++p.freq[std::move(t)];
    p.top = top_k(p.freq, k);
    return p;
}

// Jaccard of the top-trigram sets; two empty sets score 0.
inline double trigram_jaccard(const TrigramProfile& a, const TrigramProfile& b) {
    return temporal::jaccard(a.top_set(), b.top_set());
}

// Mean top-trigram Jaccard of `target` against every other profile.
inline std::optional<double> r_score(const std::vector<TrigramProfile>& profiles,
                                     std::size_t target) {
    if (profiles.size() < 2 || target >= profiles.size()) return std::nullopt;
    const auto mine = profiles[target].top_set();
    double sum = 0.0;
    for (std::size_t i = 0; i < profiles.size(); ++i) {
        if (i == target) continue;
        sum += temporal::jaccard(mine, profiles[i].top_set());
    }
    return sum / static_cast<double>(profiles.size() - 1);
}

inline std::vector<std::vector<double>> jaccard_matrix(const std::vector<TrigramProfile>& profiles) {
    const auto n = profiles.size();
    std::vector<std::set<std::string>> sets;
    for (const auto& p : profiles) sets.push_back(p.top_set());
    std::vector<std::vector<double>> m(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            double v = i == j ? (sets[i].empty() ? 0.0 : 1.0) : temporal::jaccard(sets[i], sets[j]);
            m[i][j] = m[j][i] = v;
        }
    return m;
}

inline double near_dup_rate(const SourceSlice& slice) {
    if (slice.records.empty()) return 0.0;
    auto flagged = std::count_if(slice.records.begin(), slice.records.end(),
                                 [](const Record& r) { return r.dup_flag; });
    return static_cast<double>(flagged) / static_cast<double>(slice.records.size());
}

struct SharedItem {
    std::string key;
    std::size_t source_count = 0;
    std::size_t total = 0;

    bool operator==(const SharedItem&) const = default;
};

namespace detail {

template <class Extract>
std::vector<SharedItem> shared_across(const std::vector<const SourceSlice*>& slices,
                                      Extract extract) {
    std::map<std::string, std::pair<std::set<SliceKey>, std::size_t>> seen;
    for (const auto* s : slices)
        for (const auto& r : s->records)
            for (auto& k : extract(r.text)) {
                auto& e = seen[std::move(k)];
                e.first.insert(s->key());
                ++e.second;
            }
    std::vector<SharedItem> out;
    for (auto& [k, e] : seen)
        if (e.first.size() >= 2) out.push_back({k, e.first.size(), e.second});
    std::stable_sort(out.begin(), out.end(), [](const SharedItem& a, const SharedItem& b) {
        if (a.source_count != b.source_count) return a.source_count > b.source_count;
        return a.total > b.total;
    });
    return out;
}

}  // namespace detail

// Case-folded hashtags used by two or more sources.
inline std::vector<SharedItem> shared_hashtags(const std::vector<const SourceSlice*>& slices) {
    return detail::shared_across(slices, [](const std::string& t) { return text::extract_hashtags(t); });
}

// URL hosts (without "www.") linked by two or more sources.
inline std::vector<SharedItem> shared_domains(const std::vector<const SourceSlice*>& slices) {
    return detail::shared_across(slices, [](const std::string& t) { return text::extract_domains(t); });
}

struct SharedTrigram {
    std::string trigram;
    std::size_t source_count = 0;
    std::size_t total = 0;
    std::vector<std::pair<SliceKey, std::size_t>> per_source;
};

// Trigrams occurring in two or more sources, by (source_count desc, total desc, trigram asc).
inline std::vector<SharedTrigram> shared_trigrams(const std::vector<TrigramProfile>& profiles,
                                                  std::size_t limit = 50) {
    std::map<std::string, SharedTrigram> acc;
    for (const auto& p : profiles)
        for (const auto& [t, n] : p.freq) {
            auto& e = acc[t];
            e.trigram = t;
            ++e.source_count;
            e.total += n;
            e.per_source.emplace_back(p.source, n);
        }
    std::vector<SharedTrigram> out;
    for (auto& [_, e] : acc)
        if (e.source_count >= 2) out.push_back(std::move(e));
    std::sort(out.begin(), out.end(), [](const SharedTrigram& a, const SharedTrigram& b) {
        if (a.source_count != b.source_count) return a.source_count > b.source_count;
        if (a.total != b.total) return a.total > b.total;
        return a.trigram < b.trigram;
    });
    if (out.size() > limit) out.resize(limit);
    return out;
}

}  // namespace snc::rhetoric
