#pragma once

// Labelled synthetic corpora: a "coordinated" stream (template pool, shared phrases,
// bursty timing, tight embedding clusters) and an "organic" twin (large Zipf vocabulary,
// Poisson timing, dispersed embeddings). Outputs use the ingestion formats.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "snc/config.hpp"
#include "snc/corpus.hpp"
#include "snc/semantic.hpp"
#include "snc/time.hpp"
#include "snc/types.hpp"

namespace snc::synthgen {

enum class Mode { coordinated, organic };

inline std::string_view to_string(Mode m) { return m == Mode::coordinated ? "coordinated" : "organic"; }

inline std::optional<Mode> parse_mode(std::string_view s) {
    if (s == "coordinated") return Mode::coordinated;
    if (s == "organic") return Mode::organic;
    return std::nullopt;
}

struct GenSpec {
    std::size_t n_sources = 4;
    std::size_t n_messages_per_source = 400;
    std::size_t vocab_size = 300;
    std::size_t template_pool_size = 10;  // templates (coordinated) or topic clusters (organic)
    double burst_intensity = 4.0;         // burst share of messages is b / (1 + b)
    double shared_phrase_rate = 0.3;
    double embedding_cluster_spread = 0.05;
    std::uint64_t seed = 1;

    // Where and how the output is labelled.
    std::string event_id = "synthetic_event";
    Date start = *parse_date("2025-01-01");
    int days = 30;
    std::string source_prefix;  // defaults to "<mode>_"
    std::size_t dim = 384;

    static GenSpec coordinated_default(std::uint64_t seed) {
        GenSpec s;
        s.seed = seed;
        return s;
    }

    static GenSpec organic_default(std::uint64_t seed) {
        GenSpec s;
        s.seed = seed;
        s.vocab_size = 8000;
        s.template_pool_size = 64;
        s.burst_intensity = 0.0;
        s.shared_phrase_rate = 0.0;
        s.embedding_cluster_spread = 0.5;
        return s;
    }
};

inline void validate(const GenSpec& s) {
    if (s.n_sources == 0 || s.n_messages_per_source == 0)
        throw ConfigError("synth: n_sources and n_messages_per_source must be positive");
    if (s.vocab_size < 10) throw ConfigError("synth: vocab_size must be at least 10");
    if (s.template_pool_size == 0) throw ConfigError("synth: template_pool_size must be positive");
    if (!(s.burst_intensity >= 0.0)) throw ConfigError("synth: burst_intensity must be >= 0");
    if (!(s.shared_phrase_rate >= 0.0 && s.shared_phrase_rate <= 1.0))
        throw ConfigError("synth: shared_phrase_rate must be in [0, 1]");
    if (!(s.embedding_cluster_spread > 0.0))
        throw ConfigError("synth: embedding_cluster_spread must be positive");
    if (s.days <= 0 || s.dim == 0) throw ConfigError("synth: days and dim must be positive");
}

// A coordinated spec and its organic twin must differ in the expected direction.
inline bool is_valid_twin(const GenSpec& coordinated, const GenSpec& organic) {
    return coordinated.vocab_size < organic.vocab_size && coordinated.shared_phrase_rate > 0.0 &&
           coordinated.burst_intensity > organic.burst_intensity &&
           coordinated.embedding_cluster_spread < organic.embedding_cluster_spread;
}

struct Corpus {
    std::vector<std::string> jsonl;  // raw Telegram-schema lines
    std::vector<std::pair<std::string, std::vector<double>>> vectors;
    std::size_t dim = 384;
    EventWindow window;
};

namespace detail {

// Distribution helpers built directly on the engine's output so that a seed gives the
// same corpus on every standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    std::size_t below(std::size_t n) {
        return std::min(n - 1, static_cast<std::size_t>(uniform() * static_cast<double>(n)));
    }

    double exponential(double mean) { return -mean * std::log1p(-uniform()); }

    double normal() {
        if (spare_) {
            double v = *spare_;
            spare_.reset();
            return v;
        }
        double u1 = 0.0;
        do u1 = uniform(); while (u1 <= 0.0);
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(2.0 * M_PI * u2);
        return r * std::cos(2.0 * M_PI * u2);
    }

private:
    std::mt19937_64 eng_;
    std::optional<double> spare_;
};

inline constexpr const char* kSyllables[] = {
    "ka", "ro", "mi", "te", "lu", "san", "vo", "pel", "dri", "na", "go", "shi", "ber", "tu",
    "fa", "len", "qui", "mos", "da", "rek", "zi", "po", "gan", "hu", "sel", "tor", "vin", "ye",
    "bra", "cul"};
inline constexpr std::size_t kSyllableCount = std::size(kSyllables);

// Distinct pronounceable pseudo-word for each index.
inline std::string word(std::size_t i) {
    std::string w;
    std::size_t x = i + kSyllableCount;  // at least two syllables
    while (x > 0) {
        w += kSyllables[x % kSyllableCount];
        x /= kSyllableCount;
    }
    return w;
}

inline std::vector<std::string> vocabulary(std::size_t n, Rng& rng) {
    std::vector<std::string> v;
    v.reserve(n);
    for (std::size_t i = 0; i < n; ++i) v.push_back(word(i));
    for (std::size_t i = n; i > 1; --i) std::swap(v[i - 1], v[rng.below(i)]);
    return v;
}

inline std::vector<double> random_direction(std::size_t dim, Rng& rng, double scale = 1.0) {
    std::vector<double> v(dim);
    const double sd = scale / std::sqrt(static_cast<double>(dim));
    for (auto& x : v) x = rng.normal() * sd;
    return v;
}

inline std::vector<double> normalized(std::vector<double> v) {
    double n2 = 0.0;
    for (double x : v) n2 += x * x;
    const double inv = 1.0 / std::sqrt(n2);
    for (auto& x : v) x *= inv;
    return v;
}

inline std::vector<double> perturbed(const std::vector<double>& center, double spread, Rng& rng) {
    auto noise = random_direction(center.size(), rng, spread);
    for (std::size_t d = 0; d < center.size(); ++d) noise[d] += center[d];
    return normalized(std::move(noise));
}

struct Template {
    // Each slot lists its alternatives; fixed words have one.
    std::vector<std::vector<std::string>> slots;
};

}  // namespace detail

inline Corpus generate(const GenSpec& spec, Mode mode) {
    using namespace std::chrono;
    validate(spec);
    detail::Rng rng(semantic::splitmix64(spec.seed ^ (mode == Mode::coordinated ? 0xC0 : 0x0A)));
    // Shared structure for all sources of this mode.
    auto vocab = detail::vocabulary(spec.vocab_size, rng);

    Corpus out;
    out.dim = spec.dim;
    out.window.event_id = spec.event_id;
    out.window.start = spec.start;
    out.window.end = spec.start + days{spec.days - 1};
    const double window_s = static_cast<double>(spec.days) * 86400.0;

    std::vector<detail::Template> templates;
    std::vector<std::vector<std::string>> phrases;
    std::vector<double> zipf_cdf;
    if (mode == Mode::coordinated) {
        for (std::size_t t = 0; t < spec.template_pool_size; ++t) {
            detail::Template tpl;
            const auto len = 10 + rng.below(7);
            for (std::size_t k = 0; k < len; ++k) {
                std::vector<std::string> alts{vocab[rng.below(vocab.size())]};
                if (rng.uniform() < 0.25)
                    for (int a = 0; a < 2; ++a) alts.push_back(vocab[rng.below(vocab.size())]);
                tpl.slots.push_back(std::move(alts));
            }
            templates.push_back(std::move(tpl));
        }
        for (int p = 0; p < 5; ++p) {
            std::vector<std::string> phrase;
            for (int k = 0; k < 4; ++k) phrase.push_back(vocab[rng.below(vocab.size())]);
            phrases.push_back(std::move(phrase));
        }
    } else {
        double acc = 0.0;
        for (std::size_t r = 1; r <= vocab.size(); ++r) {
            acc += 1.0 / static_cast<double>(r);
            zipf_cdf.push_back(acc);
        }
        for (auto& c : zipf_cdf) c /= acc;
    }

    // Burst centres shared by every source of the mode.
    std::vector<double> bursts;
    const double burst_share = spec.burst_intensity / (1.0 + spec.burst_intensity);
    if (burst_share > 0.0) {
        const auto n = std::max<std::size_t>(1, spec.n_messages_per_source / 25);
        for (std::size_t i = 0; i < n; ++i) bursts.push_back(rng.uniform() * window_s);
    }

    // Embedding geometry: a common theme, cluster centres around it, messages around those.
    auto theme = detail::normalized(detail::random_direction(spec.dim, rng));
    std::vector<std::vector<double>> centers;
    for (std::size_t k = 0; k < spec.template_pool_size; ++k)
        centers.push_back(detail::perturbed(theme, 2.0 * spec.embedding_cluster_spread, rng));

    const std::string prefix =
        spec.source_prefix.empty() ? std::string(to_string(mode)) + "_" : spec.source_prefix;
    const Timestamp t_start{spec.start};

    for (std::size_t s = 0; s < spec.n_sources; ++s) {
        const std::string source = prefix + std::to_string(s);
        std::vector<double> offsets;
        for (std::size_t m = 0; m < spec.n_messages_per_source; ++m) {
            double t = 0.0;
            if (!bursts.empty() && rng.uniform() < burst_share)
                t = bursts[rng.below(bursts.size())] + rng.exponential(600.0);
            else
                t = rng.uniform() * window_s;
            offsets.push_back(std::clamp(t, 0.0, window_s - 1.0));
        }
        std::sort(offsets.begin(), offsets.end());

        for (std::size_t m = 0; m < spec.n_messages_per_source; ++m) {
            std::vector<std::string> words;
            std::size_t cluster = 0;
            if (mode == Mode::coordinated) {
                cluster = rng.below(templates.size());
                for (const auto& slot : templates[cluster].slots)
                    words.push_back(slot[rng.below(slot.size())]);
                if (rng.uniform() < spec.shared_phrase_rate) {
                    const auto& p = phrases[rng.below(phrases.size())];
                    auto at = words.begin() + static_cast<std::ptrdiff_t>(rng.below(words.size() + 1));
                    words.insert(at, p.begin(), p.end());
                }
            } else {
                cluster = rng.below(centers.size());
                const auto len = 12 + rng.below(19);
                for (std::size_t k = 0; k < len; ++k) {
                    const double u = rng.uniform();
                    auto it = std::lower_bound(zipf_cdf.begin(), zipf_cdf.end(), u);
                    auto idx = static_cast<std::size_t>(std::min<std::ptrdiff_t>(
                        it - zipf_cdf.begin(), static_cast<std::ptrdiff_t>(vocab.size()) - 1));
                    words.push_back(vocab[idx]);
                }
            }
            std::string text;
            for (const auto& w : words) {
                if (!text.empty()) text += ' ';
                text += w;
            }
            text[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(text[0])));
            text += '.';

            const auto id = std::to_string(m + 1);
            const auto ts = t_start + seconds{static_cast<std::int64_t>(offsets[m])};
            nlohmann::json line{{"platform", "telegram"},
                                {"event_id", spec.event_id},
                                {"source", source},
                                {"id", id},
                                {"date", format_timestamp(ts)},
                                {"text", text},
                                {"views", 100 + static_cast<std::int64_t>(rng.below(5000))},
                                {"forwards", static_cast<std::int64_t>(rng.below(50))}};
            out.jsonl.push_back(line.dump());
            out.vectors.emplace_back("telegram:" + source + ":" + id,
                                     detail::perturbed(centers[cluster], spec.embedding_cluster_spread, rng));
        }
    }
    return out;
}

inline GenSpec parse_spec(const nlohmann::json& j, Mode mode) {
    GenSpec s = mode == Mode::coordinated ? GenSpec::coordinated_default(1) : GenSpec::organic_default(1);
    if (!j.is_object()) throw ConfigError("synth spec root must be an object");
    try {
        s.n_sources = j.value("n_sources", s.n_sources);
        s.n_messages_per_source = j.value("n_messages_per_source", s.n_messages_per_source);
        s.vocab_size = j.value("vocab_size", s.vocab_size);
        s.template_pool_size = j.value("template_pool_size", s.template_pool_size);
        s.burst_intensity = j.value("burst_intensity", s.burst_intensity);
        s.shared_phrase_rate = j.value("shared_phrase_rate", s.shared_phrase_rate);
        s.embedding_cluster_spread = j.value("embedding_cluster_spread", s.embedding_cluster_spread);
        s.seed = j.value("seed", s.seed);
        s.event_id = j.value("event_id", s.event_id);
        if (j.contains("start")) {
            auto d = parse_date(j.at("start").get<std::string>());
            if (!d) throw ConfigError("synth spec: start must be YYYY-MM-DD");
            s.start = *d;
        }
        s.days = j.value("days", s.days);
        s.source_prefix = j.value("source_prefix", s.source_prefix);
        s.dim = j.value("dim", s.dim);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("synth spec: ") + e.what());
    }
    validate(s);
    return s;
}

// Writes corpus.jsonl, embeddings.vec and config.json (the event window, no keyword filter).
inline void write(const Corpus& c, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    std::ofstream jl(dir / "corpus.jsonl", std::ios::binary);
    for (const auto& l : c.jsonl) jl << l << '\n';
    std::ofstream vec(dir / "embeddings.vec", std::ios::binary);
    semantic::write_embeddings(vec, c.vectors, c.dim);
    Config cfg;
    cfg.events = {c.window};
    std::ofstream cf(dir / "config.json", std::ios::binary);
    cf << to_json(cfg).dump(2) << '\n';
    if (!jl || !vec || !cf) throw InputError("cannot write synthetic corpus to '" + dir.string() + "'");
}

struct Loaded {
    std::vector<Record> records;
    semantic::EmbeddingStore store;
};

// Parses generated corpora in memory, exactly as ingestion would read the files.
inline Loaded load(const std::vector<const Corpus*>& parts) {
    Loaded out;
    if (!parts.empty()) out.store.dim = parts.front()->dim;
    corpus::LoadOptions opts;
    for (const auto* c : parts) {
        for (const auto& line : c->jsonl) {
            corpus::LineOutcome outcome;
            if (auto r = corpus::normalize_record(nlohmann::json::parse(line), opts, outcome))
                out.records.push_back(std::move(*r));
        }
        for (const auto& [k, v] : c->vectors) out.store.add(k, v);
    }
    out.records = corpus::flag_duplicates(std::move(out.records));
    std::sort(out.records.begin(), out.records.end(), corpus::chronological);
    return out;
}

}  // namespace snc::synthgen
