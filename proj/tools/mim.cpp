// mim — misperception toolkit CLI.
//
// Subcommands mirror the attack lifecycle stages: ingest (collect
// intelligence), analyze/profile/suggest (design the cover story), reword /
// proxy (prepare and execute), simulate (monitor), verify (counter), and
// demo (the whole study scenario end to end against bundled fixtures).

#include <atomic>
#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "httplib.h"
#include "json.hpp"
#include "mim/assistant.hpp"
#include "mim/corpus.hpp"
#include "mim/errors.hpp"
#include "mim/feedproxy.hpp"
#include "mim/fetch.hpp"
#include "mim/kmeans.hpp"
#include "mim/lexicon.hpp"
#include "mim/profile.hpp"
#include "mim/reword.hpp"
#include "mim/rss.hpp"
#include "mim/sentinel.hpp"
#include "mim/tfidf.hpp"

namespace {

std::atomic<bool> g_interrupted{false};
void handle_signal(int) { g_interrupted = true; }

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw mim::IoError("cannot write file: " + path);
    out << content;
}

// Every file-producing run leaves its resolved configuration next to the
// output, so results stay reproducible.
void write_run_sidecar(const std::string& out_path, nlohmann::ordered_json config) {
    write_file(out_path + ".run.json", config.dump(2) + "\n");
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw mim::IoError("cannot read file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

nlohmann::ordered_json substitutions_json(const std::vector<mim::Substitution>& subs) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const mim::Substitution& s : subs) {
        arr.push_back({{"start", s.start},
                       {"end", s.end},
                       {"source", s.source},
                       {"replacement", s.replacement},
                       {"pair_index", s.pair_index}});
    }
    return arr;
}

struct AnalyzeArgs {
    std::string corpus_path;
    std::string out_path = "model.json";
    std::uint32_t k = 10;
    std::uint64_t seed = 0;
    std::uint32_t max_iter = 300;
    double tol = 1e-9;
};

int cmd_ingest(const std::string& archive_dir, const std::string& out_path) {
    const std::vector<mim::NewsRelease> releases = mim::load_archive(archive_dir);
    const std::vector<mim::SentenceRecord> corpus =
        mim::build_corpus(releases, mim::StopwordPolicy::bundled());

    std::ostringstream buf;
    mim::write_corpus_jsonl(corpus, buf);
    write_file(out_path, buf.str());
    write_run_sidecar(out_path, {{"subcommand", "ingest"},
                                 {"archive", archive_dir},
                                 {"out", out_path},
                                 {"releases", releases.size()},
                                 {"sentences", corpus.size()}});
    std::cout << "ingested " << releases.size() << " releases into " << corpus.size()
              << " sentences -> " << out_path << "\n";
    return 0;
}

int cmd_analyze(const AnalyzeArgs& args) {
    const std::vector<mim::SentenceRecord> corpus =
        mim::read_corpus_jsonl_file(args.corpus_path);
    const mim::TermMatrix matrix = mim::build_tfidf(corpus);
    const mim::ClusterConfig cfg{args.k, args.seed, args.max_iter, args.tol};
    const mim::ClusterModel model = mim::fit_kmeans(matrix, cfg);

    write_file(args.out_path, mim::model_to_json(model, matrix.vocabulary).dump(2) + "\n");
    write_run_sidecar(args.out_path, {{"subcommand", "analyze"},
                                      {"corpus", args.corpus_path},
                                      {"out", args.out_path},
                                      {"k", cfg.k},
                                      {"seed", cfg.seed},
                                      {"max_iter", cfg.max_iter},
                                      {"tol", cfg.tol}});
    std::cout << "fitted k=" << cfg.k << " over " << corpus.size() << " sentences, "
              << matrix.vocabulary.size() << " terms; inertia=" << model.inertia
              << (model.converged ? "" : " (max_iter reached)") << " -> " << args.out_path
              << "\n";
    return 0;
}

// Rebuilds the matrix from the corpus and checks it against the model file.
std::tuple<mim::TermMatrix, mim::ClusterModel, std::vector<mim::SentenceRecord>>
load_model_and_matrix(const std::string& model_path, const std::string& corpus_path) {
    const std::vector<mim::SentenceRecord> corpus = mim::read_corpus_jsonl_file(corpus_path);
    const mim::TermMatrix matrix = mim::build_tfidf(corpus);
    std::vector<std::string> vocabulary;
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_file(model_path));
    } catch (const nlohmann::json::parse_error& e) {
        throw mim::ParseError(e.byte, "model file is not valid JSON");
    }
    mim::ClusterModel model = mim::model_from_json(j, &vocabulary);
    if (vocabulary != matrix.vocabulary) {
        throw mim::ValidationError("model vocabulary does not match this corpus; "
                                   "re-run analyze");
    }
    if (model.assignment.size() != matrix.rows.size()) {
        throw mim::ValidationError("model assignment size does not match this corpus");
    }
    return {matrix, model, corpus};
}

int cmd_profile(const std::string& model_path, const std::string& corpus_path,
                std::size_t top_n, bool as_json, const std::string& out_path) {
    const auto [matrix, model, corpus] = load_model_and_matrix(model_path, corpus_path);
    const std::vector<mim::ClusterProfile> profiles =
        mim::profile_clusters(matrix, model, corpus, top_n);

    std::string rendered = as_json ? mim::profiles_to_json(profiles).dump(2) + "\n"
                                   : mim::render_profile_table(profiles);
    const std::vector<std::uint32_t> ranking = mim::rank_regulatory_clusters(profiles);
    if (!as_json) {
        rendered += "regulatory ranking (most repetitive first):";
        for (std::uint32_t id : ranking) rendered += " " + std::to_string(id);
        rendered += "\n";
    }
    if (out_path.empty()) {
        std::cout << rendered;
    } else {
        write_file(out_path, rendered);
        write_run_sidecar(out_path, {{"subcommand", "profile"},
                                     {"model", model_path},
                                     {"corpus", corpus_path},
                                     {"top", top_n},
                                     {"json", as_json}});
        std::cout << "wrote " << out_path << "\n";
    }
    return 0;
}

int cmd_suggest(const std::string& model_path, const std::string& corpus_path,
                std::vector<std::uint32_t> clusters, std::size_t n, bool as_json,
                const std::string& out_path) {
    const auto [matrix, model, corpus] = load_model_and_matrix(model_path, corpus_path);
    const std::vector<mim::ClusterProfile> profiles =
        mim::profile_clusters(matrix, model, corpus);

    if (clusters.empty()) {
        // Default to the four most repetitive clusters, the study's choice.
        const std::vector<std::uint32_t> ranking = mim::rank_regulatory_clusters(profiles);
        clusters.assign(ranking.begin(),
                        ranking.begin() + std::min<std::size_t>(4, ranking.size()));
    }
    const auto terms = mim::surface_candidate_terms(profiles, clusters, n);

    std::string rendered;
    if (as_json) {
        nlohmann::ordered_json j;
        j["clusters"] = clusters;
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const auto& [term, weight] : terms) {
            arr.push_back({{"term", term}, {"weight", weight}});
        }
        j["terms"] = std::move(arr);
        rendered = j.dump(2) + "\n";
    } else {
        std::ostringstream os;
        os << "candidate terms from clusters";
        for (std::uint32_t id : clusters) os << " " << id;
        os << " (advisory input to lexicon authorship):\n";
        for (const auto& [term, weight] : terms) {
            char line[160];
            std::snprintf(line, sizeof(line), "  %-24s %.6f\n", term.c_str(), weight);
            os << line;
        }
        rendered = os.str();
    }
    if (out_path.empty()) {
        std::cout << rendered;
    } else {
        write_file(out_path, rendered);
        write_run_sidecar(out_path, {{"subcommand", "suggest"},
                                     {"model", model_path},
                                     {"corpus", corpus_path},
                                     {"clusters", clusters},
                                     {"n", n}});
        std::cout << "wrote " << out_path << "\n";
    }
    return 0;
}

int cmd_reword(const std::string& lexicon_path, const std::string& text) {
    const mim::ValenceLexicon lexicon = mim::load_lexicon(lexicon_path);
    const mim::RewordResult result = mim::reword(text, lexicon);
    nlohmann::ordered_json j;
    j["input"] = text;
    j["output"] = result.output;
    j["suppressed"] = result.suppressed;
    j["substitutions"] = substitutions_json(result.substitutions);
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_proxy(mim::ProxyConfig config) {
    mim::FeedProxy proxy(std::move(config));
    const int port = proxy.start();
    std::cout << "feed proxy listening on http://127.0.0.1:" << port
              << " (endpoints: /feed /log /healthz)\n";
    std::signal(SIGINT, handle_signal);
    std::signal(SIGTERM, handle_signal);
    while (!g_interrupted) {
        std::this_thread::sleep_for(std::chrono::milliseconds(100));
    }
    proxy.stop();
    return 0;
}

int cmd_simulate(const std::string& registry_path, const std::string& utterance,
                 std::size_t items) {
    mim::AssistantConfig config;
    if (items > 0) config.briefing_items = items;
    const mim::Assistant assistant(mim::SkillRegistry::load(registry_path), config);
    const mim::BriefingResponse response = assistant.run_briefing(utterance);
    switch (response.status) {
        case mim::BriefingResponse::Status::ok:
            std::cout << response.briefing->spoken_text << "\n";
            return 0;
        case mim::BriefingResponse::Status::not_addressed:
            std::cout << "(not addressed)\n";
            return 0;
        case mim::BriefingResponse::Status::skill_not_found:
            std::cerr << response.message << "\n";
            return 2;
        case mim::BriefingResponse::Status::skill_unavailable:
            std::cerr << response.message << "\n";
            return 3;
    }
    return 2;
}

int cmd_verify(const std::string& source_url, const std::string& delivered_url,
               const std::string& lexicon_path, bool as_json, double threshold,
               std::size_t rounds, double interval, const std::string& log_path,
               std::size_t keep_last) {
    mim::ValenceLexicon lexicon;
    const bool have_lexicon = !lexicon_path.empty();
    if (have_lexicon) lexicon = mim::load_lexicon(lexicon_path);

    mim::VerifyOptions verify_options;
    verify_options.title_similarity_threshold = threshold;

    const auto print = [&](const mim::IntegrityReport& report) {
        if (as_json) {
            std::cout << mim::report_to_json(report).dump(2) << "\n";
        } else {
            std::cout << mim::render_report_table(report);
        }
    };

    if (rounds == 1 && log_path.empty()) {
        const mim::Feed source = mim::parse_feed(mim::fetch_url(source_url));
        const mim::Feed delivered = mim::parse_feed(mim::fetch_url(delivered_url));
        mim::IntegrityReport report =
            mim::verify(source, delivered, have_lexicon ? &lexicon : nullptr, verify_options);
        report.source_url = source_url;
        report.delivered_url = delivered_url;
        print(report);
        return 0;
    }

    mim::WatchOptions watch;
    watch.rounds = rounds;
    watch.interval_seconds = interval;
    watch.keep_last = keep_last;
    watch.log_path = log_path;
    mim::FeedWatcher watcher(source_url, delivered_url, have_lexicon ? &lexicon : nullptr,
                             watch, verify_options);
    watcher.run(print);
    return 0;
}

int cmd_demo(const std::string& data_dir) {
    const std::string feed_path = data_dir + "/feeds/osha_snapshot.xml";
    const std::string lexicon_path = data_dir + "/study_osha.lexicon.json";
    const std::string upstream_bytes = read_file(feed_path);

    // Fixture upstream standing in for the publisher's RSS endpoint.
    httplib::Server upstream;
    upstream.Get("/feed.xml", [&](const httplib::Request&, httplib::Response& res) {
        res.set_content(upstream_bytes, "application/rss+xml; charset=utf-8");
    });
    const int upstream_port = upstream.bind_to_any_port("127.0.0.1");
    if (upstream_port <= 0) throw mim::NetworkError("cannot bind fixture upstream");
    std::thread upstream_thread([&] { upstream.listen_after_bind(); });
    upstream.wait_until_ready();
    const std::string upstream_url =
        "http://127.0.0.1:" + std::to_string(upstream_port) + "/feed.xml";

    // The covert reworder between the publisher and the assistant.
    mim::ProxyConfig proxy_config;
    proxy_config.upstream_url = upstream_url;
    proxy_config.lexicon_path = lexicon_path;
    proxy_config.listen_address = "127.0.0.1:0";
    mim::FeedProxy proxy(proxy_config);
    proxy.start();
    const std::string proxy_url = proxy.base_url() + "/feed";

    const auto briefing_via = [&](const std::string& endpoint) {
        mim::SkillRegistry registry;
        registry.register_skill({"news", endpoint, "In OSHA news"});
        const mim::Assistant assistant{std::move(registry)};
        const mim::BriefingResponse response =
            assistant.run_briefing("Alexa, tell me the news today");
        if (response.status != mim::BriefingResponse::Status::ok) {
            throw mim::NetworkError("briefing failed: " + response.message);
        }
        return response.briefing->spoken_text;
    };

    std::cout << "Alexa:  " << briefing_via(upstream_url) << "\n\n";
    std::cout << "Malexa: " << briefing_via(proxy_url) << "\n\n";

    const mim::ValenceLexicon lexicon = mim::load_lexicon(lexicon_path);
    const mim::Feed source = mim::parse_feed(mim::fetch_url(upstream_url));
    const mim::Feed delivered = mim::parse_feed(mim::fetch_url(proxy_url));
    mim::IntegrityReport report = mim::verify(source, delivered, &lexicon);
    report.source_url = upstream_url;
    report.delivered_url = proxy_url;
    std::cout << "sentinel report (upstream vs proxy):\n"
              << mim::render_report_table(report);

    proxy.stop();
    upstream.stop();
    upstream_thread.join();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mim — malware-induced misperception research toolkit"};
    app.require_subcommand(1);

    // ingest
    std::string archive_dir, ingest_out = "corpus.jsonl";
    CLI::App* ingest = app.add_subcommand("ingest", "Load a news-release archive into a sentence corpus");
    ingest->add_option("--archive", archive_dir, "Archive directory (index.json + bodies)")->required();
    ingest->add_option("--out", ingest_out, "Corpus JSONL output path");

    // analyze
    AnalyzeArgs analyze_args;
    CLI::App* analyze = app.add_subcommand("analyze", "TF-IDF + KMeans over a sentence corpus");
    analyze->add_option("--corpus", analyze_args.corpus_path, "Corpus JSONL path")->required();
    analyze->add_option("--out", analyze_args.out_path, "Model JSON output path");
    analyze->add_option("--k", analyze_args.k, "Number of clusters");
    analyze->add_option("--seed", analyze_args.seed, "Seeding RNG seed");
    analyze->add_option("--max-iter", analyze_args.max_iter, "Maximum Lloyd iterations");
    analyze->add_option("--tol", analyze_args.tol, "Centroid-shift stopping threshold");

    // profile
    std::string model_path, corpus_path, out_path;
    std::size_t top_n = 100;
    bool as_json = false;
    CLI::App* profile = app.add_subcommand("profile", "Cluster sizes, lexical diversity, top terms");
    profile->add_option("--model", model_path, "Model JSON path")->required();
    profile->add_option("--corpus", corpus_path, "Corpus JSONL path")->required();
    profile->add_option("--top", top_n, "Top terms kept per cluster");
    profile->add_flag("--json", as_json, "Emit JSON instead of a table");
    profile->add_option("--out", out_path, "Write report here instead of stdout");

    // suggest
    std::string suggest_model, suggest_corpus, suggest_out;
    std::vector<std::uint32_t> suggest_clusters;
    std::size_t suggest_n = 100;
    bool suggest_json = false;
    CLI::App* suggest = app.add_subcommand("suggest", "Candidate valence terms from chosen clusters");
    suggest->add_option("--model", suggest_model, "Model JSON path")->required();
    suggest->add_option("--corpus", suggest_corpus, "Corpus JSONL path")->required();
    suggest->add_option("--clusters", suggest_clusters,
                        "Cluster ids to merge (default: 4 most repetitive)")->delimiter(',');
    suggest->add_option("--n", suggest_n, "Terms to report");
    suggest->add_flag("--json", suggest_json, "Emit JSON instead of a table");
    suggest->add_option("--out", suggest_out, "Write report here instead of stdout");

    // reword
    std::string reword_lexicon, reword_text;
    CLI::App* reword_cmd = app.add_subcommand("reword", "Apply a lexicon to one text");
    reword_cmd->add_option("--lexicon", reword_lexicon, "Lexicon JSON path")->required();
    reword_cmd->add_option("text", reword_text, "Text to reword")->required();

    // proxy
    std::string proxy_config_path, proxy_upstream, proxy_lexicon, proxy_listen;
    double proxy_ttl = -1.0;
    if (const char* env = std::getenv("MIM_CONFIG")) proxy_config_path = env;
    CLI::App* proxy_cmd = app.add_subcommand("proxy", "Serve the covert feed-rewording proxy");
    proxy_cmd->add_option("--config", proxy_config_path,
                          "Proxy config JSON (default: $MIM_CONFIG)");
    proxy_cmd->add_option("--upstream", proxy_upstream, "Upstream feed URL override");
    proxy_cmd->add_option("--lexicon", proxy_lexicon, "Lexicon path override");
    proxy_cmd->add_option("--listen", proxy_listen, "host:port override (port 0 = ephemeral)");
    proxy_cmd->add_option("--ttl", proxy_ttl, "Upstream cache TTL seconds override");

    // simulate
    std::string registry_path, utterance;
    std::size_t simulate_items = 0;
    CLI::App* simulate = app.add_subcommand("simulate", "Run one utterance through the assistant");
    simulate->add_option("--registry", registry_path, "Skill registry JSON path")->required();
    simulate->add_option("utterance", utterance, "Spoken sentence")->required();
    simulate->add_option("--items", simulate_items, "Headlines per briefing (default 3)");

    // verify
    std::string verify_source, verify_delivered, verify_lexicon, verify_log;
    bool verify_json = false;
    double verify_threshold = 0.8, verify_interval = 60.0;
    std::size_t verify_rounds = 1, verify_keep = 20;
    CLI::App* verify_cmd = app.add_subcommand("verify", "Compare a delivered feed against its source");
    verify_cmd->add_option("--source", verify_source, "Declared source feed URL")->required();
    verify_cmd->add_option("--delivered", verify_delivered, "Delivered feed URL")->required();
    verify_cmd->add_option("--lexicon", verify_lexicon, "Known lexicon for attribution");
    verify_cmd->add_flag("--json", verify_json, "Emit JSON instead of a table");
    verify_cmd->add_option("--threshold", verify_threshold,
                           "Title-similarity alignment threshold");
    verify_cmd->add_option("--rounds", verify_rounds, "Watch rounds (1 = one-shot)");
    verify_cmd->add_option("--interval", verify_interval, "Seconds between watch rounds");
    verify_cmd->add_option("--log", verify_log, "JSON-lines report log path");
    verify_cmd->add_option("--keep", verify_keep, "Reports retained in the log");

    // demo
    std::string demo_data = "data";
    CLI::App* demo = app.add_subcommand("demo", "Full study scenario against bundled fixtures");
    demo->add_option("--data", demo_data, "Bundled data directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (ingest->parsed()) return cmd_ingest(archive_dir, ingest_out);
        if (analyze->parsed()) return cmd_analyze(analyze_args);
        if (profile->parsed()) return cmd_profile(model_path, corpus_path, top_n, as_json, out_path);
        if (suggest->parsed()) {
            return cmd_suggest(suggest_model, suggest_corpus, suggest_clusters, suggest_n,
                               suggest_json, suggest_out);
        }
        if (reword_cmd->parsed()) return cmd_reword(reword_lexicon, reword_text);
        if (proxy_cmd->parsed()) {
            mim::ProxyConfig config;
            if (!proxy_config_path.empty()) {
                nlohmann::json j;
                try {
                    j = nlohmann::json::parse(read_file(proxy_config_path));
                } catch (const nlohmann::json::parse_error& e) {
                    throw mim::ParseError(e.byte, "proxy config is not valid JSON");
                }
                config = mim::proxy_config_from_json(j);
            }
            if (!proxy_upstream.empty()) config.upstream_url = proxy_upstream;
            if (!proxy_lexicon.empty()) config.lexicon_path = proxy_lexicon;
            if (!proxy_listen.empty()) config.listen_address = proxy_listen;
            if (proxy_ttl >= 0) config.cache_ttl_seconds = proxy_ttl;
            if (config.upstream_url.empty()) {
                throw mim::ValidationError("proxy needs an upstream URL (--upstream or config)");
            }
            if (config.lexicon_path.empty()) {
                throw mim::ValidationError("proxy needs a lexicon (--lexicon or config)");
            }
            return cmd_proxy(std::move(config));
        }
        if (simulate->parsed()) return cmd_simulate(registry_path, utterance, simulate_items);
        if (verify_cmd->parsed()) {
            return cmd_verify(verify_source, verify_delivered, verify_lexicon, verify_json,
                              verify_threshold, verify_rounds, verify_interval, verify_log,
                              verify_keep);
        }
        if (demo->parsed()) return cmd_demo(demo_data);
    } catch (const mim::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.kind() == mim::Error::Kind::network ? 3 : 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
