// Command-line entry point: ingest, metrics, snc, report, all, synth.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "snc/snc.hpp"

namespace {

// "[telegram=|reddit=]path"
snc::pipeline::CorpusInput parse_corpus_arg(const std::string& arg) {
    auto eq = arg.find('=');
    if (eq != std::string::npos) {
        if (auto p = snc::parse_platform(arg.substr(0, eq))) return {arg.substr(eq + 1), p};
    }
    return {arg, std::nullopt};
}

struct Shared {
    std::string config_path;
    std::vector<std::string> corpus;
    std::string embeddings;
    std::string out = "out";
    std::string event;
    std::string period = "full";
    std::optional<std::uint64_t> seed;
    std::vector<std::string> skip;
    std::string pool;
};

void add_shared(CLI::App* cmd, Shared& s) {
    cmd->add_option("--config", s.config_path, "JSON config (defaults built in when omitted)");
    cmd->add_option("--corpus", s.corpus, "JSONL corpus file, optionally prefixed 'telegram=' or 'reddit='")
        ->required();
    cmd->add_option("--embeddings", s.embeddings, "Vector file keyed by platform:source:id");
    cmd->add_option("--out", s.out, "Output directory");
    cmd->add_option("--event", s.event, "Restrict to one event_id");
    cmd->add_option("--period", s.period, "pre | acute | post | full")
        ->check(CLI::IsMember({"pre", "acute", "post", "full"}));
    cmd->add_option("--seed", s.seed, "Sampling seed (overrides config)");
    cmd->add_option("--skip", s.skip, "Skip a metric module")
        ->check(CLI::IsMember({"lexical", "temporal", "rhetoric", "semantic"}));
    cmd->add_option("--normalization-pool", s.pool, "joint | per_platform")
        ->check(CLI::IsMember({"joint", "per_platform"}));
}

int run(const Shared& s, snc::pipeline::Stage stage) {
    using namespace snc;
    pipeline::Options opt;
    try {
        opt.config = s.config_path.empty() ? default_config() : load_config(s.config_path);
    } catch (const ConfigError& e) {
        std::cerr << nlohmann::json{{"status", "error"}, {"kind", "config"}, {"message", e.what()}, {"exit_code", 2}}.dump()
                  << '\n';
        return 2;
    }
    if (!s.config_path.empty()) opt.config_path = s.config_path;
    if (s.seed) opt.config.seed = *s.seed;
    if (s.pool == "joint") opt.config.normalization_pool = NormalizationPool::joint;
    if (s.pool == "per_platform") opt.config.normalization_pool = NormalizationPool::per_platform;
    for (const auto& c : s.corpus) opt.corpus.push_back(parse_corpus_arg(c));
    if (!s.embeddings.empty()) opt.embeddings_path = s.embeddings;
    opt.out_dir = s.out;
    if (!s.event.empty()) opt.event = s.event;
    opt.period = *parse_period(s.period);
    for (const auto& m : s.skip) opt.modules.skip(m);
    opt.stage = stage;
    return pipeline::run_pipeline(opt);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Coordination-signal scoring for message sources"};
    app.require_subcommand(1);

    struct Cmd {
        const char* name;
        const char* help;
        snc::pipeline::Stage stage;
    };
    const Cmd cmds[] = {
        {"ingest", "Load, normalize and flag the corpus", snc::pipeline::Stage::ingest},
        {"metrics", "Per-source lexical, temporal, rhetorical and semantic metrics", snc::pipeline::Stage::metrics},
        {"snc", "Metrics plus the composite score ranking", snc::pipeline::Stage::snc},
        {"report", "Descriptive statistics: volumes, language mix, ECDFs", snc::pipeline::Stage::report},
        {"all", "Every stage", snc::pipeline::Stage::all},
    };
    std::vector<Shared> shared(std::size(cmds));
    std::vector<CLI::App*> subs;
    for (std::size_t i = 0; i < std::size(cmds); ++i) {
        auto* sub = app.add_subcommand(cmds[i].name, cmds[i].help);
        add_shared(sub, shared[i]);
        subs.push_back(sub);
    }

    std::string spec_path, mode_name, synth_out = "synth";
    auto* synth = app.add_subcommand("synth", "Generate a labelled synthetic corpus");
    synth->add_option("--spec", spec_path, "JSON generator spec")->required();
    synth->add_option("--mode", mode_name, "coordinated | organic")
        ->required()
        ->check(CLI::IsMember({"coordinated", "organic"}));
    synth->add_option("--out", synth_out, "Output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    for (std::size_t i = 0; i < subs.size(); ++i)
        if (subs[i]->parsed()) return run(shared[i], cmds[i].stage);

    try {
        auto mode = *snc::synthgen::parse_mode(mode_name);
        auto body = snc::read_file(spec_path);
        auto j = nlohmann::json::parse(body, nullptr, false);
        if (j.is_discarded()) throw snc::ConfigError("spec '" + spec_path + "' is not valid JSON");
        snc::synthgen::write(snc::synthgen::generate(snc::synthgen::parse_spec(j, mode), mode), synth_out);
    } catch (const snc::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const snc::InputError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
