#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "mim/lexicon.hpp"
#include "mim/rss.hpp"

namespace mim {

enum class VerdictStatus { identical, reworded, missing, extra };

std::string_view to_string(VerdictStatus status);

// One replaced region of one field: what the source said, what was
// delivered instead, and where in the source field it sat.
struct SpanDiff {
    std::string field;  // "title" or "description"
    std::size_t offset = 0;
    std::string original;
    std::string delivered;
    std::optional<std::size_t> pair_index;  // set when a known lexicon explains it
};

struct ItemVerdict {
    std::string guid;
    VerdictStatus status = VerdictStatus::identical;
    std::vector<SpanDiff> spans;
    std::vector<std::size_t> attribution;  // pair indices, sorted, de-duplicated
};

struct IntegrityReport {
    std::string source_url;
    std::string delivered_url;
    std::vector<ItemVerdict> verdicts;
    std::size_t count_identical = 0;
    std::size_t count_reworded = 0;
    std::size_t count_missing = 0;
    std::size_t count_extra = 0;
    std::optional<std::string> fetch_error;
    std::string generated_at;
};

struct VerifyOptions {
    // Minimum normalized LCS ratio for aligning items that share neither
    // guid nor link. Legitimate feeds retitle items across interfaces, so
    // this is a knob, not a constant.
    double title_similarity_threshold = 0.8;
};

// Compares a delivered feed verbatim against its declared source. Items are
// aligned by guid, then link, then title similarity; aligned pairs get a
// token-level LCS diff with minimal replaced spans; a supplied lexicon
// attributes spans to pairs (widening a span over shared context tokens
// when that makes it coincide with a pair).
IntegrityReport verify(const Feed& source, const Feed& delivered,
                       const ValenceLexicon* lexicon = nullptr,
                       const VerifyOptions& options = {});

// Token-level diff of one field; exposed for tests.
std::vector<SpanDiff> diff_field(std::string_view field, std::string_view original,
                                 std::string_view delivered,
                                 const ValenceLexicon* lexicon = nullptr);

// Normalized character LCS ratio in [0, 1], case-insensitive.
double title_similarity(std::string_view a, std::string_view b);

nlohmann::ordered_json report_to_json(const IntegrityReport& report);
std::string render_report_table(const IntegrityReport& report);

struct WatchOptions {
    double interval_seconds = 60.0;
    std::size_t rounds = 1;
    std::size_t keep_last = 20;  // reports retained in the log file
    std::filesystem::path log_path;  // empty: no persistence
};

// Continuous form of verify: fetches both URLs every interval, emits a
// report per round (fetch failures become error-marked reports and the
// watch continues), and persists the last keep_last reports as JSON lines.
class FeedWatcher {
public:
    FeedWatcher(std::string source_url, std::string delivered_url,
                const ValenceLexicon* lexicon, WatchOptions watch = {},
                VerifyOptions verify = {});

    void run(const std::function<void(const IntegrityReport&)>& on_report);

private:
    std::string source_url_;
    std::string delivered_url_;
    const ValenceLexicon* lexicon_;
    WatchOptions watch_;
    VerifyOptions verify_;
    std::vector<std::string> persisted_lines_;
};

}  // namespace mim
