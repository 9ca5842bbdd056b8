#pragma once

// Lexical diversity: MATTR, word entropy and character-trigram entropy.

#include <unicode/brkiter.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "snc/text.hpp"
#include "snc/types.hpp"

namespace snc::lexical {

namespace detail {

inline icu::BreakIterator& word_iterator() {
    thread_local std::unique_ptr<icu::BreakIterator> it = [] {
        UErrorCode status = U_ZERO_ERROR;
        std::unique_ptr<icu::BreakIterator> bi(
            icu::BreakIterator::createWordInstance(icu::Locale::getRoot(), status));
        if (U_FAILURE(status) || !bi)
            throw std::runtime_error("ICU word break iterator unavailable");
        return bi;
    }();
    return *it;
}

inline bool has_alnum(const icu::UnicodeString& s) {
    for (int32_t i = 0; i < s.length();) {
        UChar32 c = s.char32At(i);
        if (u_isalnum(c)) return true;
        i += U16_LENGTH(c);
    }
    return false;
}

}  // namespace detail

// Unicode word segmentation of the lowercased text. URLs are removed beforehand,
// segments without a letter or digit are dropped, and a '#' directly followed by a
// word is kept as one hashtag token.
inline std::vector<std::string> tokenize(std::string_view s) {
    std::vector<std::string> tokens;
    auto cleaned = text::to_lower(text::remove_urls(s));
    if (cleaned.empty()) return tokens;
    auto u = icu::UnicodeString::fromUTF8(
        icu::StringPiece(cleaned.data(), static_cast<int32_t>(cleaned.size())));
    auto& bi = detail::word_iterator();
    bi.setText(u);
    bool pending_hash = false;
    int32_t hash_end = -1;
    int32_t start = bi.first();
    for (int32_t end = bi.next(); end != icu::BreakIterator::DONE; start = end, end = bi.next()) {
        icu::UnicodeString seg = u.tempSubStringBetween(start, end);
        if (seg == icu::UnicodeString(u'#')) {
            pending_hash = true;
            hash_end = end;
            continue;
        }
        if (detail::has_alnum(seg)) {
            std::string tok;
            if (pending_hash && hash_end == start) tok = "#";
            seg.toUTF8String(tok);
            tokens.push_back(std::move(tok));
        }
        pending_hash = false;
    }
    return tokens;
}

// Moving-average type-token ratio with a rolling type count, O(N).
// Sequences shorter than the window fall back to the whole-sequence TTR.
template <class Token>
std::optional<double> mattr(std::span<const Token> tokens, std::size_t window) {
    if (tokens.empty() || window == 0) return std::nullopt;
    std::unordered_map<Token, std::size_t> ids;
    std::vector<std::size_t> seq;
    seq.reserve(tokens.size());
    for (const auto& t : tokens) seq.push_back(ids.try_emplace(t, ids.size()).first->second);

    const std::size_t n = seq.size();
    if (n < window) return static_cast<double>(ids.size()) / static_cast<double>(n);

    std::vector<std::size_t> count(ids.size(), 0);
    std::size_t types = 0;
    for (std::size_t i = 0; i < window; ++i)
        if (count[seq[i]]++ == 0) ++types;
    // Integer sum of type counts keeps the mean exact up to the final division.
    std::uint64_t total = types;
    for (std::size_t i = window; i < n; ++i) {
        if (--count[seq[i - window]] == 0) --types;
        if (count[seq[i]]++ == 0) ++types;
        total += types;
    }
    const auto windows = static_cast<double>(n - window + 1);
    return static_cast<double>(total) / static_cast<double>(window) / windows;
}

template <class Token>
std::optional<double> mattr(const std::vector<Token>& tokens, std::size_t window) {
    return mattr(std::span<const Token>(tokens), window);
}

// Shannon entropy in bits of a count table.
template <class Counts>
double entropy_of_counts(const Counts& counts) {
    std::vector<std::size_t> c;
    c.reserve(counts.size());
    std::size_t total = 0;
    for (const auto& [_, n] : counts) {
        c.push_back(n);
        total += n;
    }
    if (total == 0) return 0.0;
    std::sort(c.begin(), c.end());
    double h = 0.0;
    const auto t = static_cast<double>(total);
    for (auto n : c) {
        const double p = static_cast<double>(n) / t;
        h -= p * std::log2(p);
    }
    return h == 0.0 ? 0.0 : h;
}

template <class Token>
std::optional<double> word_entropy(std::span<const Token> tokens) {
    if (tokens.empty()) return std::nullopt;
    std::unordered_map<Token, std::size_t> counts;
    for (const auto& t : tokens) ++counts[t];
    return entropy_of_counts(counts);
}

template <class Token>
std::optional<double> word_entropy(const std::vector<Token>& tokens) {
    return word_entropy(std::span<const Token>(tokens));
}

// Entropy of overlapping character 3-grams after lowercasing and whitespace collapsing.
inline std::optional<double> char_trigram_entropy(std::string_view s) {
    auto u = text::to_u32(text::collapse_whitespace(text::to_lower(s)));
    if (u.size() < 3) return std::nullopt;
    std::unordered_map<std::uint64_t, std::size_t> counts;
    for (std::size_t i = 0; i + 3 <= u.size(); ++i) {
        const std::uint64_t key = (static_cast<std::uint64_t>(u[i]) << 42) |
                                  (static_cast<std::uint64_t>(u[i + 1]) << 21) |
                                  static_cast<std::uint64_t>(u[i + 2]);
        ++counts[key];
    }
    return entropy_of_counts(counts);
}

struct LexicalScore {
    std::optional<double> mattr;
    std::optional<double> h_word;
    std::optional<double> h_char3;
    std::size_t token_count = 0;
    std::size_t window_size = 500;

    bool missing() const { return token_count == 0; }
};

// Messages are concatenated in timestamp order (slices are already sorted); the
// character stream joins message texts with a single space.
inline LexicalScore lexical_score(const SourceSlice& slice, std::size_t window = 500) {
    LexicalScore out;
    out.window_size = window;
    std::vector<std::string> tokens;
    std::string joined;
    for (const auto& r : slice.records) {
        auto t = tokenize(r.text);
        tokens.insert(tokens.end(), std::make_move_iterator(t.begin()),
                      std::make_move_iterator(t.end()));
        if (!joined.empty()) joined += ' ';
        joined += r.text;
    }
    out.token_count = tokens.size();
    if (tokens.empty()) return out;
    out.mattr = mattr(tokens, window);
    out.h_word = word_entropy(tokens);
    out.h_char3 = char_trigram_entropy(joined);
    return out;
}

}  // namespace snc::lexical
