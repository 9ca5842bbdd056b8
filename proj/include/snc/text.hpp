#pragma once

// Unicode text utilities shared by the corpus, lexical and rhetoric modules.
// Case mapping, character classes and scripts come from ICU.

#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/locid.h>
#include <unicode/uscript.h>
#include <unicode/utf8.h>

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "snc/types.hpp"

namespace snc::text {

// Decodes UTF-8; malformed sequences become U+FFFD.
inline std::u32string to_u32(std::string_view s) {
    std::u32string out;
    out.reserve(s.size());
    const auto* p = reinterpret_cast<const std::uint8_t*>(s.data());
    const auto n = static_cast<std::int32_t>(s.size());
    std::int32_t i = 0;
    while (i < n) {
        UChar32 c;
        U8_NEXT(p, i, n, c);
        out.push_back(c < 0 ? U'�' : static_cast<char32_t>(c));
    }
    return out;
}

inline void append_utf8(std::string& out, char32_t c) {
    std::uint8_t buf[4];
    std::int32_t len = 0;
    UBool err = false;
    U8_APPEND(buf, len, 4, static_cast<UChar32>(c), err);
    if (err) {
        out += "\xEF\xBF\xBD";
        return;
    }
    out.append(reinterpret_cast<const char*>(buf), static_cast<std::size_t>(len));
}

inline std::string to_utf8(std::u32string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char32_t c : s) append_utf8(out, c);
    return out;
}

inline bool is_space(char32_t c) { return u_isUWhiteSpace(static_cast<UChar32>(c)); }

inline bool is_alpha(char32_t c) { return u_isUAlphabetic(static_cast<UChar32>(c)); }

inline bool is_word_char(char32_t c) {
    auto cp = static_cast<UChar32>(c);
    if (c == U'_') return true;
    if (u_isalnum(cp)) return true;
    auto cat = u_charType(cp);
    return cat == U_NON_SPACING_MARK || cat == U_COMBINING_SPACING_MARK;
}

inline bool is_punct(char32_t c) { return u_ispunct(static_cast<UChar32>(c)); }

inline bool is_cyrillic_letter(char32_t c) {
    UErrorCode status = U_ZERO_ERROR;
    return is_alpha(c) &&
           uscript_getScript(static_cast<UChar32>(c), &status) == USCRIPT_CYRILLIC &&
           U_SUCCESS(status);
}

// Full Unicode lowercase mapping (root locale).
inline std::string to_lower(std::string_view s) {
    auto u = icu::UnicodeString::fromUTF8(icu::StringPiece(s.data(), static_cast<int32_t>(s.size())));
    u.toLower(icu::Locale::getRoot());
    std::string out;
    u.toUTF8String(out);
    return out;
}

inline std::size_t codepoint_count(std::string_view s) {
    std::size_t n = 0;
    for (unsigned char c : s)
        if ((c & 0xC0) != 0x80) ++n;
    return n;
}

// Trims Unicode whitespace at both ends.
inline std::string strip(std::string_view s) {
    auto u = to_u32(s);
    std::size_t b = 0, e = u.size();
    while (b < e && is_space(u[b])) ++b;
    while (e > b && is_space(u[e - 1])) --e;
    return to_utf8(std::u32string_view(u).substr(b, e - b));
}

// Collapses every whitespace run to one ASCII space and trims the ends.
inline std::string collapse_whitespace(std::string_view s) {
    std::string out;
    bool pending = false;
    for (char32_t c : to_u32(s)) {
        if (is_space(c)) {
            pending = !out.empty();
            continue;
        }
        if (pending) out += ' ';
        pending = false;
        append_utf8(out, c);
    }
    return out;
}

inline std::size_t count_words(std::string_view s) {
    std::size_t n = 0;
    bool in_word = false;
    for (char32_t c : to_u32(s)) {
        if (is_space(c)) {
            in_word = false;
        } else if (!in_word) {
            in_word = true;
            ++n;
        }
    }
    return n;
}

namespace detail {

inline bool ascii_iequal_prefix(std::string_view s, std::size_t pos, std::string_view prefix) {
    if (pos + prefix.size() > s.size()) return false;
    for (std::size_t i = 0; i < prefix.size(); ++i) {
        char c = s[pos + i];
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
        if (c != prefix[i]) return false;
    }
    return true;
}

inline bool is_ascii_alnum(char c) {
    return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

inline bool url_terminator(unsigned char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v' ||
           c == '"' || c == '<' || c == '>';
}

}  // namespace detail

// Byte ranges [first, second) of URLs: a "http://", "https://" or "www." prefix not
// preceded by an ASCII letter or digit, running to the next whitespace.
inline std::vector<std::pair<std::size_t, std::size_t>> find_urls(std::string_view s) {
    std::vector<std::pair<std::size_t, std::size_t>> spans;
    std::size_t i = 0;
    while (i < s.size()) {
        std::size_t prefix = 0;
        if (i == 0 || !detail::is_ascii_alnum(s[i - 1])) {
            if (detail::ascii_iequal_prefix(s, i, "https://")) prefix = 8;
            else if (detail::ascii_iequal_prefix(s, i, "http://")) prefix = 7;
            else if (detail::ascii_iequal_prefix(s, i, "www.")) prefix = 4;
        }
        if (prefix == 0 || i + prefix >= s.size() ||
            detail::url_terminator(static_cast<unsigned char>(s[i + prefix]))) {
            ++i;
            continue;
        }
        std::size_t j = i + prefix;
        while (j < s.size() && !detail::url_terminator(static_cast<unsigned char>(s[j]))) ++j;
        spans.emplace_back(i, j);
        i = j;
    }
    return spans;
}

// Replaces each URL with a single space.
inline std::string remove_urls(std::string_view s) {
    auto spans = find_urls(s);
    if (spans.empty()) return std::string(s);
    std::string out;
    std::size_t last = 0;
    for (auto [b, e] : spans) {
        out.append(s.substr(last, b - last));
        out += ' ';
        last = e;
    }
    out.append(s.substr(last));
    return out;
}

// Host of a URL, lowercased, without scheme, port, path or a leading "www.".
inline std::string url_domain(std::string_view url) {
    std::size_t pos = 0;
    if (detail::ascii_iequal_prefix(url, 0, "https://")) pos = 8;
    else if (detail::ascii_iequal_prefix(url, 0, "http://")) pos = 7;
    std::size_t end = pos;
    while (end < url.size() && url[end] != '/' && url[end] != '?' && url[end] != '#' &&
           url[end] != ':' && url[end] != '\\')
        ++end;
    std::string host(url.substr(pos, end - pos));
    auto at = host.rfind('@');
    if (at != std::string::npos) host.erase(0, at + 1);
    while (!host.empty() && (host.back() == '.' || host.back() == ',' || host.back() == ')' ||
                             host.back() == ']' || host.back() == '!' || host.back() == ';'))
        host.pop_back();
    host = to_lower(host);
    if (host.rfind("www.", 0) == 0) host.erase(0, 4);
    return host;
}

// Lowercase, URLs removed, punctuation removed except '#' and '@', whitespace collapsed.
inline std::string normalize_for_hash(std::string_view s) {
    auto lowered = to_lower(remove_urls(s));
    std::string kept;
    kept.reserve(lowered.size());
    for (char32_t c : to_u32(lowered)) {
        if (is_punct(c) && c != U'#' && c != U'@') continue;
        append_utf8(kept, c);
    }
    return collapse_whitespace(kept);
}

inline constexpr std::string_view kHashAlgorithm = "fnv1a64";

// 64-bit FNV-1a.
inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

// Russian iff Cyrillic letters make up more than `threshold` of all alphabetic
// characters. Text without letters is en_or_unknown.
inline Lang detect_language(std::string_view s, double threshold = 0.15) {
    std::size_t letters = 0, cyrillic = 0;
    for (char32_t c : to_u32(s)) {
        if (!is_alpha(c)) continue;
        ++letters;
        if (is_cyrillic_letter(c)) ++cyrillic;
    }
    if (letters == 0) return Lang::en_or_unknown;
    return static_cast<double>(cyrillic) > threshold * static_cast<double>(letters)
               ? Lang::ru
               : Lang::en_or_unknown;
}

// Case-folded hashtags without the leading '#'.
inline std::vector<std::string> extract_hashtags(std::string_view s) {
    std::vector<std::string> tags;
    auto u = to_u32(s);
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (u[i] != U'#') continue;
        std::size_t j = i + 1;
        while (j < u.size() && is_word_char(u[j])) ++j;
        if (j > i + 1) {
            tags.push_back(to_lower(to_utf8(std::u32string_view(u).substr(i + 1, j - i - 1))));
            i = j - 1;
        }
    }
    return tags;
}

inline std::vector<std::string> extract_domains(std::string_view s) {
    std::vector<std::string> out;
    for (auto [b, e] : find_urls(s)) {
        auto d = url_domain(s.substr(b, e - b));
        if (!d.empty()) out.push_back(std::move(d));
    }
    return out;
}

}  // namespace snc::text
