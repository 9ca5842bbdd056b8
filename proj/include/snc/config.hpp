#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "snc/text.hpp"
#include "snc/time.hpp"
#include "snc/types.hpp"

namespace snc {

enum class NormalizationPool { joint, per_platform };

inline std::string_view to_string(NormalizationPool p) {
    return p == NormalizationPool::joint ? "joint" : "per_platform";
}

struct Weights {
    double h = 0.25;
    double b = 0.25;
    double r = 0.25;
    double d = 0.25;

    double total() const { return h + b + r + d; }
};

struct Config {
    std::vector<EventWindow> events;
    std::string hash_algorithm{text::kHashAlgorithm};
    std::uint64_t seed = 20240413;
    std::size_t mattr_window = 500;
    std::size_t semantic_cap = 800;
    int coactivity_bin_hours = 6;
    std::size_t top_trigrams = 100;
    std::size_t min_text_chars = 10;
    double cyrillic_threshold = 0.15;
    Weights weights;
    NormalizationPool normalization_pool = NormalizationPool::joint;

    const EventWindow* find_event(std::string_view id) const {
        for (const auto& e : events)
            if (e.event_id == id) return &e;
        return nullptr;
    }
};

inline EventWindow make_window(std::string id, std::string_view start, std::string_view end,
                               std::optional<std::string_view> t0,
                               std::vector<std::string> keywords) {
    EventWindow w;
    w.event_id = std::move(id);
    w.start = *parse_date(start);
    w.end = *parse_date(end);
    if (t0) w.t0 = *parse_date(*t0);
    w.keywords = std::move(keywords);
    return w;
}

// The six collection windows with multilingual keyword lists.
inline std::vector<EventWindow> default_event_windows() {
    return {
        make_window("ukraine_war_general", "2025-05-15", "2026-05-14", std::nullopt,
                    {"ukrain", "украин", "kyiv", "kiev", "киев", "zelensk", "зеленск", "donbas",
                     "донбас", "kharkiv", "харьков", "crimea", "крым", "russia", "росси",
                     "putin", "путин", "sbu", "всу", "frontline", "фронт"}),
        make_window("israel_gaza_general", "2025-05-15", "2026-05-14", std::nullopt,
                    {"gaza", "газа", "сектор газа", "israel", "израил", "hamas", "хамас",
                     "idf", "цахал", "netanyahu", "нетаньяху", "rafah", "рафах",
                     "west bank", "hostage", "заложник"}),
        make_window("iran_israel_escalation", "2024-04-01", "2026-05-14", "2024-04-13",
                    {"iran", "иран", "tehran", "тегеран", "irgc", "ксир", "khamenei",
                     "хаменеи", "hormuz", "ормузск", "israel", "израил", "missile", "ракет",
                     "hezbollah", "хезболл"}),
        make_window("gaza_conflict_full", "2023-10-01", "2026-05-14", "2023-10-07",
                    {"gaza", "газа", "hamas", "хамас", "october 7", "7 октября", "idf",
                     "цахал", "hostage", "заложник", "rafah", "рафах", "ceasefire",
                     "перемири"}),
        make_window("trump_ukraine_diplomacy", "2025-01-20", "2026-05-14", std::nullopt,
                    {"trump", "трамп", "witkoff", "уиткофф", "peace talks", "переговор",
                     "ceasefire", "перемири", "rare earth", "редкоземельн", "minerals deal",
                     "territorial concession", "zelensk", "зеленск"}),
        make_window("nato_summit_2025", "2025-06-11", "2025-07-09", "2025-06-25",
                    {"nato", "нато", "hague", "гааг", "rutte", "рютте", "summit", "саммит",
                     "article 5", "defence spending", "defense spending", "5%"}),
    };
}

inline Config default_config() {
    Config c;
    c.events = default_event_windows();
    return c;
}

namespace detail {

inline EventWindow parse_window(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("event entry must be an object");
    EventWindow w;
    auto need = [&](const char* key) -> std::string {
        if (!j.contains(key) || !j[key].is_string())
            throw ConfigError(std::string("event entry missing string key '") + key + "'");
        return j[key].get<std::string>();
    };
    w.event_id = need("event_id");
    auto start = parse_date(need("start"));
    auto end = parse_date(need("end"));
    if (!start || !end) throw ConfigError("event '" + w.event_id + "': dates must be YYYY-MM-DD");
    w.start = *start;
    w.end = *end;
    if (!(w.start < w.end)) throw ConfigError("event '" + w.event_id + "': start must precede end");
    if (j.contains("t0") && !j["t0"].is_null()) {
        auto t0 = j["t0"].is_string() ? parse_date(j["t0"].get<std::string>()) : std::nullopt;
        if (!t0) throw ConfigError("event '" + w.event_id + "': t0 must be YYYY-MM-DD or null");
        if (*t0 < w.start || w.end < *t0)
            throw ConfigError("event '" + w.event_id + "': t0 outside [start, end]");
        w.t0 = *t0;
    }
    if (j.contains("keywords")) {
        if (!j["keywords"].is_array()) throw ConfigError("keywords must be an array");
        for (const auto& k : j["keywords"]) {
            if (!k.is_string()) throw ConfigError("keywords must be strings");
            auto kw = text::to_lower(k.get<std::string>());
            if (!kw.empty()) w.keywords.push_back(std::move(kw));
        }
    }
    return w;
}

}  // namespace detail

// JSON config. Every key is optional; absent keys keep their defaults and an absent
// "events" array selects the built-in windows.
inline Config parse_config(const nlohmann::json& j) {
    Config c = default_config();
    if (!j.is_object()) throw ConfigError("config root must be an object");
    try {
        if (j.contains("events")) {
            c.events.clear();
            for (const auto& e : j.at("events")) c.events.push_back(detail::parse_window(e));
            for (std::size_t a = 0; a < c.events.size(); ++a)
                for (std::size_t b = a + 1; b < c.events.size(); ++b)
                    if (c.events[a].event_id == c.events[b].event_id)
                        throw ConfigError("duplicate event_id '" + c.events[a].event_id + "'");
        }
        if (j.contains("hash_algorithm")) c.hash_algorithm = j.at("hash_algorithm").get<std::string>();
        if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("mattr_window")) c.mattr_window = j.at("mattr_window").get<std::size_t>();
        if (j.contains("semantic_cap")) c.semantic_cap = j.at("semantic_cap").get<std::size_t>();
        if (j.contains("coactivity_bin_hours"))
            c.coactivity_bin_hours = j.at("coactivity_bin_hours").get<int>();
        if (j.contains("top_trigrams")) c.top_trigrams = j.at("top_trigrams").get<std::size_t>();
        if (j.contains("min_text_chars")) c.min_text_chars = j.at("min_text_chars").get<std::size_t>();
        if (j.contains("cyrillic_threshold"))
            c.cyrillic_threshold = j.at("cyrillic_threshold").get<double>();
        if (j.contains("weights")) {
            const auto& w = j.at("weights");
            c.weights.h = w.value("h", c.weights.h);
            c.weights.b = w.value("b", c.weights.b);
            c.weights.r = w.value("r", c.weights.r);
            c.weights.d = w.value("d", c.weights.d);
        }
        if (j.contains("normalization_pool")) {
            auto p = j.at("normalization_pool").get<std::string>();
            if (p == "joint") c.normalization_pool = NormalizationPool::joint;
            else if (p == "per_platform") c.normalization_pool = NormalizationPool::per_platform;
            else throw ConfigError("normalization_pool must be 'joint' or 'per_platform'");
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    if (c.hash_algorithm != text::kHashAlgorithm)
        throw ConfigError("unsupported hash_algorithm '" + c.hash_algorithm + "'");
    if (c.mattr_window == 0) throw ConfigError("mattr_window must be positive");
    if (c.semantic_cap < 2) throw ConfigError("semantic_cap must be at least 2");
    if (c.coactivity_bin_hours <= 0) throw ConfigError("coactivity_bin_hours must be positive");
    if (c.top_trigrams == 0) throw ConfigError("top_trigrams must be positive");
    for (double w : {c.weights.h, c.weights.b, c.weights.r, c.weights.d})
        if (!(w >= 0.0)) throw ConfigError("weights must be non-negative");
    if (!(c.weights.total() > 0.0)) throw ConfigError("weights must not all be zero");
    return c;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline Config load_config(const std::string& path) {
    std::string body;
    try {
        body = read_file(path);
    } catch (const InputError& e) {
        throw ConfigError(e.what());
    }
    auto j = nlohmann::json::parse(body, nullptr, false);
    if (j.is_discarded()) throw ConfigError("config '" + path + "' is not valid JSON");
    return parse_config(j);
}

inline nlohmann::json to_json(const Config& c) {
    nlohmann::json events = nlohmann::json::array();
    for (const auto& e : c.events) {
        nlohmann::json je{{"event_id", e.event_id},
                          {"start", format_date(e.start)},
                          {"end", format_date(e.end)},
                          {"keywords", e.keywords}};
        je["t0"] = e.t0 ? nlohmann::json(format_date(*e.t0)) : nlohmann::json(nullptr);
        events.push_back(std::move(je));
    }
    return {{"events", events},
            {"hash_algorithm", c.hash_algorithm},
            {"seed", c.seed},
            {"mattr_window", c.mattr_window},
            {"semantic_cap", c.semantic_cap},
            {"coactivity_bin_hours", c.coactivity_bin_hours},
            {"top_trigrams", c.top_trigrams},
            {"min_text_chars", c.min_text_chars},
            {"cyrillic_threshold", c.cyrillic_threshold},
            {"weights", {{"h", c.weights.h}, {"b", c.weights.b}, {"r", c.weights.r}, {"d", c.weights.d}}},
            {"normalization_pool", std::string(to_string(c.normalization_pool))}};
}

}  // namespace snc
