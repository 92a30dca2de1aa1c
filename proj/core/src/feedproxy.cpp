#include "mim/feedproxy.hpp"

#include <atomic>
#include <chrono>
#include <iostream>
#include <mutex>
#include <thread>

#include "httplib.h"
#include "mim/errors.hpp"
#include "mim/fetch.hpp"
#include "mim/reword.hpp"

namespace mim {

namespace {

std::string field_name(RewordField f) {
    return f == RewordField::title ? "title" : "description";
}

bool has_field(const std::vector<RewordField>& fields, RewordField f) {
    return std::find(fields.begin(), fields.end(), f) != fields.end();
}

nlohmann::ordered_json substitutions_json(const std::vector<Substitution>& subs) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const Substitution& s : subs) {
        arr.push_back({{"start", s.start},
                       {"end", s.end},
                       {"source", s.source},
                       {"replacement", s.replacement},
                       {"pair_index", s.pair_index}});
    }
    return arr;
}

}  // namespace

ProxyConfig proxy_config_from_json(const nlohmann::json& j) {
    ProxyConfig cfg;
    try {
        cfg.upstream_url = j.value("upstream", cfg.upstream_url);
        cfg.lexicon_path = j.value("lexicon", cfg.lexicon_path.string());
        cfg.listen_address = j.value("listen", cfg.listen_address);
        cfg.cache_ttl_seconds = j.value("ttl", cfg.cache_ttl_seconds);
        if (j.contains("reword_fields")) {
            cfg.reword_fields.clear();
            for (const auto& f : j.at("reword_fields")) {
                const std::string name = f.get<std::string>();
                if (name == "title") cfg.reword_fields.push_back(RewordField::title);
                else if (name == "description") cfg.reword_fields.push_back(RewordField::description);
                else throw ValidationError("unknown reword field: " + name);
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("bad proxy config: ") + e.what());
    }
    if (cfg.reword_fields.empty()) {
        throw ValidationError("proxy config needs at least one reword field");
    }
    if (cfg.cache_ttl_seconds < 0) throw ValidationError("cache TTL must be >= 0");
    return cfg;
}

TransformResult transform_feed(const Feed& feed, const ValenceLexicon& lexicon,
                               const std::vector<RewordField>& fields) {
    // Suppression and scope are decided on the headline; description
    // rewording therefore runs with those lexicon parts stripped.
    ValenceLexicon description_lexicon = lexicon;
    description_lexicon.suppress.clear();
    description_lexicon.scope.require_any.clear();

    TransformResult result;
    result.feed.channel_title = feed.channel_title;
    result.feed.channel_link = feed.channel_link;
    result.feed.channel_description = feed.channel_description;
    result.feed.raw = feed.raw;

    for (const FeedItem& item : feed.items) {
        ItemTransformLog log;
        log.guid = item.guid;

        RewordResult title_result = reword(item.title, lexicon);
        if (title_result.suppressed) {
            log.suppressed = true;
            result.logs.push_back(std::move(log));
            continue;  // dropped from the delivered feed
        }

        bool in_scope = lexicon.scope.require_any.empty();
        for (const std::string& phrase : lexicon.scope.require_any) {
            if (in_scope) break;
            in_scope = contains_phrase(item.title, phrase);
        }

        FeedItem out = item;
        if (has_field(fields, RewordField::title)) {
            if (!title_result.substitutions.empty()) {
                out.title = title_result.output;
                out.title_edits = title_result.substitutions;
                out.dirty = true;
            }
            log.title = std::move(title_result);
        }
        if (has_field(fields, RewordField::description) && item.description && in_scope) {
            RewordResult desc_result = reword(*item.description, description_lexicon);
            if (!desc_result.substitutions.empty()) {
                out.description = desc_result.output;
                out.description_edits = desc_result.substitutions;
                out.dirty = true;
            }
            log.description = std::move(desc_result);
        }
        result.feed.items.push_back(std::move(out));
        result.logs.push_back(std::move(log));
    }
    return result;
}

nlohmann::ordered_json transform_log_json(const std::vector<ItemTransformLog>& logs) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const ItemTransformLog& log : logs) {
        nlohmann::ordered_json entry;
        entry["guid"] = log.guid;
        entry["suppressed"] = log.suppressed;
        entry["title"] = substitutions_json(log.title.substitutions);
        if (log.description) {
            entry["description"] = substitutions_json(log.description->substitutions);
        }
        arr.push_back(std::move(entry));
    }
    return arr;
}

struct FeedProxy::Impl {
    ProxyConfig cfg;

    mutable std::mutex mu;
    ValenceLexicon lexicon;
    std::filesystem::file_time_type lexicon_mtime{};
    bool lexicon_reload_warned = false;

    std::string cached_bytes;
    bool cache_warm = false;
    std::chrono::steady_clock::time_point last_attempt{};
    std::uint64_t fetch_count = 0;

    nlohmann::ordered_json last_log = nlohmann::ordered_json::array();

    httplib::Server server;
    std::thread server_thread;
    std::atomic<int> bound_port{0};

    explicit Impl(ProxyConfig config) : cfg(std::move(config)) {
        lexicon = load_lexicon(cfg.lexicon_path);
        std::error_code ec;
        lexicon_mtime = std::filesystem::last_write_time(cfg.lexicon_path, ec);
    }

    void maybe_reload_lexicon() {
        std::error_code ec;
        const auto mtime = std::filesystem::last_write_time(cfg.lexicon_path, ec);
        if (ec || mtime == lexicon_mtime) return;
        try {
            lexicon = load_lexicon(cfg.lexicon_path);
            lexicon_reload_warned = false;
        } catch (const Error& e) {
            if (!lexicon_reload_warned) {
                std::cerr << "feedproxy: lexicon reload failed, keeping last good: "
                          << e.what() << '\n';
                lexicon_reload_warned = true;
            }
        }
        lexicon_mtime = mtime;
    }

    void refresh_cache_if_stale() {
        const auto now = std::chrono::steady_clock::now();
        const auto ttl = std::chrono::duration<double>(cfg.cache_ttl_seconds);
        if (cache_warm && now - last_attempt < ttl) return;
        last_attempt = now;
        ++fetch_count;
        try {
            cached_bytes = fetch_url(cfg.upstream_url);
            cache_warm = true;
        } catch (const Error&) {
            if (!cache_warm) throw;  // cold cache: nothing to serve
            // warm cache: keep serving the last good upstream copy
        }
    }

    std::string render_feed() {
        std::lock_guard<std::mutex> lock(mu);
        maybe_reload_lexicon();
        refresh_cache_if_stale();
        const Feed upstream = parse_feed(cached_bytes);
        TransformResult transformed = transform_feed(upstream, lexicon, cfg.reword_fields);
        nlohmann::ordered_json log;
        log["upstream"] = cfg.upstream_url;
        log["items"] = transform_log_json(transformed.logs);
        last_log = std::move(log);
        return serialize_feed(transformed.feed);
    }
};

FeedProxy::FeedProxy(ProxyConfig config) : impl_(std::make_unique<Impl>(std::move(config))) {}

FeedProxy::~FeedProxy() { stop(); }

int FeedProxy::start() {
    auto& server = impl_->server;
    server.Get("/feed", [this](const httplib::Request&, httplib::Response& res) {
        try {
            res.set_content(impl_->render_feed(), "application/rss+xml; charset=utf-8");
        } catch (const Error& e) {
            res.status = 502;
            res.set_content(std::string("upstream unavailable: ") + e.what(), "text/plain");
        }
    });
    server.Get("/log", [this](const httplib::Request&, httplib::Response& res) {
        res.set_content(log_json().dump(2), "application/json");
    });
    server.Get("/healthz", [](const httplib::Request&, httplib::Response& res) {
        res.set_content("ok", "text/plain");
    });

    std::string host = impl_->cfg.listen_address;
    int port = 0;
    if (const std::size_t colon = host.rfind(':'); colon != std::string::npos) {
        port = std::stoi(host.substr(colon + 1));
        host = host.substr(0, colon);
    }
    if (host.empty()) host = "127.0.0.1";

    if (port == 0) {
        port = server.bind_to_any_port(host);
        if (port <= 0) throw NetworkError("cannot bind " + impl_->cfg.listen_address);
    } else if (!server.bind_to_port(host, port)) {
        throw NetworkError("cannot bind " + impl_->cfg.listen_address);
    }
    impl_->bound_port = port;
    impl_->server_thread = std::thread([this] { impl_->server.listen_after_bind(); });
    impl_->server.wait_until_ready();
    return port;
}

void FeedProxy::stop() {
    if (impl_ && impl_->server_thread.joinable()) {
        impl_->server.stop();
        impl_->server_thread.join();
    }
}

int FeedProxy::port() const { return impl_->bound_port; }

std::string FeedProxy::base_url() const {
    return "http://127.0.0.1:" + std::to_string(impl_->bound_port.load());
}

std::string FeedProxy::render_feed() { return impl_->render_feed(); }

nlohmann::ordered_json FeedProxy::log_json() const {
    std::lock_guard<std::mutex> lock(impl_->mu);
    return impl_->last_log;
}

std::uint64_t FeedProxy::upstream_fetch_count() const {
    std::lock_guard<std::mutex> lock(impl_->mu);
    return impl_->fetch_count;
}

}  // namespace mim
