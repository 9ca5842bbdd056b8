#pragma once

// Semantic homogenization from externally computed sentence embeddings.
//
// Vector file format:
//   dim=<D> count=<N>
//   <record_key> <D space-separated decimal floats>     (N lines)
// Record keys are "<platform>:<source>:<id>" (see Record::key()).

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "snc/text.hpp"
#include "snc/types.hpp"

namespace snc::semantic {

struct EmbeddingStore {
    std::size_t dim = 384;
    std::unordered_map<std::string, std::vector<double>> vectors;
    std::size_t skipped_zero = 0;
    std::size_t skipped_duplicate = 0;

    // Stores v scaled to unit length. Returns false for zero vectors and repeated keys.
    bool add(const std::string& key, std::vector<double> v) {
        if (v.size() != dim)
            throw InputError("embedding '" + key + "' has dimension " + std::to_string(v.size()) +
                             ", expected " + std::to_string(dim));
        double norm2 = 0.0;
        for (double x : v) {
            if (!std::isfinite(x)) throw InputError("embedding '" + key + "' has a non-finite value");
            norm2 += x * x;
        }
        if (norm2 == 0.0) {
            ++skipped_zero;
            return false;
        }
        if (vectors.contains(key)) {
            ++skipped_duplicate;
            return false;
        }
        const double inv = 1.0 / std::sqrt(norm2);
        for (double& x : v) x *= inv;
        vectors.emplace(key, std::move(v));
        return true;
    }

    const std::vector<double>* find(const std::string& key) const {
        auto it = vectors.find(key);
        return it == vectors.end() ? nullptr : &it->second;
    }

    std::size_t size() const { return vectors.size(); }
};

namespace detail {

inline std::string_view next_field(std::string_view& line) {
    std::size_t b = 0;
    while (b < line.size() && (line[b] == ' ' || line[b] == '\t')) ++b;
    std::size_t e = b;
    while (e < line.size() && line[e] != ' ' && line[e] != '\t') ++e;
    auto f = line.substr(b, e - b);
    line.remove_prefix(e);
    return f;
}

template <class T>
bool parse_number(std::string_view s, T& out) {
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && p == s.data() + s.size();
}

}  // namespace detail

inline EmbeddingStore load_embeddings(std::istream& in, const std::string& name = "<stream>") {
    std::string line;
    if (!std::getline(in, line)) throw InputError(name + ": empty vector file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::size_t dim = 0, count = 0;
    {
        std::string_view rest(line);
        auto a = detail::next_field(rest);
        auto b = detail::next_field(rest);
        if (a.rfind("dim=", 0) != 0 || b.rfind("count=", 0) != 0 ||
            !detail::parse_number(a.substr(4), dim) || !detail::parse_number(b.substr(6), count) ||
            dim == 0 || !detail::next_field(rest).empty())
            throw InputError(name + ": header must be 'dim=<D> count=<N>'");
    }
    EmbeddingStore store;
    store.dim = dim;
    std::size_t rows = 0;
    std::vector<double> v;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        ++rows;
        std::string_view rest(line);
        std::string key(detail::next_field(rest));
        v.clear();
        for (auto f = detail::next_field(rest); !f.empty(); f = detail::next_field(rest)) {
            double x = 0.0;
            if (!detail::parse_number(f, x))
                throw InputError(name + ": bad number '" + std::string(f) + "' for '" + key + "'");
            v.push_back(x);
        }
        if (v.size() != dim)
            throw InputError(name + ": mixed dimensions (" + std::to_string(v.size()) + " vs " +
                             std::to_string(dim) + ") at '" + key + "'");
        store.add(key, v);
    }
    if (rows != count)
        throw InputError(name + ": header count " + std::to_string(count) + " but " +
                         std::to_string(rows) + " rows");
    return store;
}

inline EmbeddingStore load_embeddings(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read embeddings file '" + path + "'");
    return load_embeddings(in, path);
}

inline void write_embeddings(std::ostream& out,
                             const std::vector<std::pair<std::string, std::vector<double>>>& rows,
                             std::size_t dim) {
    out << "dim=" << dim << " count=" << rows.size() << '\n';
    char buf[40];
    for (const auto& [key, v] : rows) {
        out << key;
        for (double x : v) {
            std::snprintf(buf, sizeof buf, " %.9g", x);
            out << buf;
        }
        out << '\n';
    }
}

// Uniform sample without replacement of min(cap, n) indices out of n, returned ascending.
// Uses raw mt19937_64 output with rejection so the selection is identical on every
// standard library.
inline std::vector<std::size_t> sample_indices(std::size_t n, std::size_t cap, std::uint64_t seed) {
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    if (n <= cap) return idx;
    std::mt19937_64 rng(seed);
    auto below = [&](std::uint64_t bound) {
        const std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            std::uint64_t r = rng();
            if (r >= threshold) return r % bound;
        }
    };
    for (std::size_t i = 0; i < cap; ++i) {
        auto j = i + static_cast<std::size_t>(below(n - i));
        std::swap(idx[i], idx[j]);
    }
    idx.resize(cap);
    std::sort(idx.begin(), idx.end());
    return idx;
}

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Sampling seed for one slice, derived from the run seed and the slice identity.
inline std::uint64_t slice_seed(std::uint64_t seed, const SourceSlice& s) {
    std::string id = s.event_id + '\x1f' + std::string(to_string(s.platform)) + '\x1f' + s.source;
    return splitmix64(seed ^ text::fnv1a64(id));
}

// Mean pairwise dot product over i < j via the sum-vector identity
//   sum_{i != j} e_i.e_j = |sum e_i|^2 - sum |e_i|^2,
// O(n * dim) instead of O(n^2 * dim).
inline std::optional<double> mean_pairwise_dot(std::span<const std::vector<double>* const> vs) {
    const auto n = vs.size();
    if (n < 2) return std::nullopt;
    const auto dim = vs.front()->size();
    std::vector<double> sum(dim, 0.0);
    double self = 0.0;
    for (const auto* v : vs)
        for (std::size_t d = 0; d < dim; ++d) {
            sum[d] += (*v)[d];
            self += (*v)[d] * (*v)[d];
        }
    double sum2 = 0.0;
    for (double x : sum) sum2 += x * x;
    const auto nn = static_cast<double>(n);
    return (sum2 - self) / (nn * (nn - 1.0));
}

struct SemanticSample {
    std::vector<std::string> keys;  // ascending
    std::vector<const std::vector<double>*> vectors;
    std::uint64_t seed = 0;
};

// Seeded uniform sample of the slice's embedded records, ordered by record key.
inline SemanticSample sample_slice(const SourceSlice& slice, const EmbeddingStore& store,
                                   std::uint64_t seed, std::size_t cap = 800) {
    std::map<std::string, const std::vector<double>*> available;
    for (const auto& r : slice.records) {
        auto k = r.key();
        if (const auto* v = store.find(k)) available.emplace(std::move(k), v);
    }
    SemanticSample out;
    out.seed = slice_seed(seed, slice);
    std::vector<std::pair<std::string, const std::vector<double>*>> items(available.begin(),
                                                                          available.end());
    for (auto i : sample_indices(items.size(), cap, out.seed)) {
        out.keys.push_back(items[i].first);
        out.vectors.push_back(items[i].second);
    }
    return out;
}

struct SemanticScore {
    std::optional<double> h_score;  // in [-1, 1]; not clamped
    std::size_t n_sampled = 0;
    std::uint64_t seed = 0;
};

inline SemanticScore h_score(const SemanticSample& sample) {
    return {mean_pairwise_dot(sample.vectors), sample.vectors.size(), sample.seed};
}

inline SemanticScore h_score(const SourceSlice& slice, const EmbeddingStore& store,
                             std::uint64_t seed, std::size_t cap = 800) {
    return h_score(sample_slice(slice, store, seed, cap));
}

// Off-diagonal (s, s'): mean dot product over all cross pairs of the two samples, i.e.
// the dot product of their mean vectors. Diagonal: within-source H. Sources without
// embeddings have a missing row.
inline std::vector<std::vector<std::optional<double>>> cross_source_matrix(
    const std::vector<const SourceSlice*>& slices, const EmbeddingStore& store, std::uint64_t seed,
    std::size_t cap = 800) {
    const auto n = slices.size();
    std::vector<SemanticSample> samples;
    std::vector<std::vector<double>> means;
    for (const auto* s : slices) {
        samples.push_back(sample_slice(*s, store, seed, cap));
        std::vector<double> m(store.dim, 0.0);
        const auto& vs = samples.back().vectors;
        for (const auto* v : vs)
            for (std::size_t d = 0; d < store.dim; ++d) m[d] += (*v)[d];
        if (!vs.empty())
            for (double& x : m) x /= static_cast<double>(vs.size());
        means.push_back(std::move(m));
    }
    std::vector<std::vector<std::optional<double>>> out(n, std::vector<std::optional<double>>(n));
    for (std::size_t i = 0; i < n; ++i) {
        if (samples[i].vectors.empty()) continue;
        out[i][i] = h_score(samples[i]).h_score;
        for (std::size_t j = i + 1; j < n; ++j) {
            if (samples[j].vectors.empty()) continue;
            double dot = 0.0;
            for (std::size_t d = 0; d < store.dim; ++d) dot += means[i][d] * means[j][d];
            out[i][j] = out[j][i] = dot;
        }
    }
    return out;
}

}  // namespace snc::semantic
