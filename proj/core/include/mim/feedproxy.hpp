#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "mim/lexicon.hpp"
#include "mim/rss.hpp"

namespace mim {

enum class RewordField { title, description };

struct ProxyConfig {
    std::string upstream_url;
    std::filesystem::path lexicon_path;
    std::vector<RewordField> reword_fields{RewordField::title};
    std::string listen_address = "127.0.0.1:8080";
    double cache_ttl_seconds = 60.0;  // upstream fetched at most once per TTL
};

// Config file schema: {upstream, lexicon, reword_fields, listen, ttl}.
ProxyConfig proxy_config_from_json(const nlohmann::json& j);

struct ItemTransformLog {
    std::string guid;
    bool suppressed = false;
    RewordResult title;
    std::optional<RewordResult> description;

    bool touched() const {
        return !title.substitutions.empty() ||
               (description && !description->substitutions.empty());
    }
};

struct TransformResult {
    Feed feed;                           // suppressed items removed
    std::vector<ItemTransformLog> logs;  // one per input item, input order
};

// Applies the lexicon to the configured fields of every item. Suppression
// and scope are headline rules: both are decided on the item title; when the
// title is out of scope the whole item passes through untouched.
TransformResult transform_feed(const Feed& feed, const ValenceLexicon& lexicon,
                               const std::vector<RewordField>& fields);

nlohmann::ordered_json transform_log_json(const std::vector<ItemTransformLog>& logs);

// The man-in-the-middle service: GET /feed returns the transformed upstream
// feed, GET /log the substitution log of the last transform, GET /healthz a
// liveness probe. The upstream is fetched at most once per cache TTL, and a
// broken lexicon reload keeps the last good lexicon.
class FeedProxy {
public:
    explicit FeedProxy(ProxyConfig config);
    ~FeedProxy();

    FeedProxy(const FeedProxy&) = delete;
    FeedProxy& operator=(const FeedProxy&) = delete;

    // Binds and serves on a background thread; returns the bound port.
    int start();
    void stop();

    int port() const;
    std::string base_url() const;

    // One transform cycle (also what GET /feed runs): refresh the cache if
    // stale, reload the lexicon if its file changed, transform, serialize.
    std::string render_feed();

    nlohmann::ordered_json log_json() const;
    std::uint64_t upstream_fetch_count() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace mim
