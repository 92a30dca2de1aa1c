#include "mim/sentinel.hpp"

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <ctime>
#include <fstream>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "mim/errors.hpp"
#include "mim/fetch.hpp"
#include "mim/reword.hpp"
#include "mim/text.hpp"

namespace mim {

namespace {

std::string iso_timestamp_now() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::vector<std::string> exact_tokens(std::string_view text, const std::vector<TokenSpan>& spans) {
    std::vector<std::string> out;
    out.reserve(spans.size());
    for (const TokenSpan& s : spans) out.emplace_back(text.substr(s.begin, s.end - s.begin));
    return out;
}

// Longest common subsequence as aligned index pairs (strictly increasing on
// both sides; earliest-match canonical backtrack).
std::vector<std::pair<std::size_t, std::size_t>> lcs_pairs(const std::vector<std::string>& a,
                                                           const std::vector<std::string>& b) {
    const std::size_t n = a.size(), m = b.size();
    std::vector<std::vector<std::uint32_t>> dp(n + 1, std::vector<std::uint32_t>(m + 1, 0));
    for (std::size_t i = n; i-- > 0;) {
        for (std::size_t j = m; j-- > 0;) {
            dp[i][j] = a[i] == b[j] ? dp[i + 1][j + 1] + 1
                                    : std::max(dp[i + 1][j], dp[i][j + 1]);
        }
    }
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    std::size_t i = 0, j = 0;
    while (i < n && j < m) {
        if (a[i] == b[j] && dp[i][j] == dp[i + 1][j + 1] + 1) {
            pairs.emplace_back(i, j);
            ++i;
            ++j;
        } else if (dp[i + 1][j] >= dp[i][j + 1]) {
            ++i;
        } else {
            ++j;
        }
    }
    return pairs;
}

// One mismatch region between anchors, as token index ranges.
struct Hunk {
    std::size_t o1 = 0, o2 = 0;  // original tokens [o1, o2)
    std::size_t d1 = 0, d2 = 0;  // delivered tokens [d1, d2)
};

std::vector<Hunk> extract_hunks(const std::vector<std::pair<std::size_t, std::size_t>>& common,
                                std::size_t n, std::size_t m) {
    std::vector<Hunk> hunks;
    std::size_t prev_o = 0, prev_d = 0;
    auto emit = [&](std::size_t ao, std::size_t ad) {
        if (ao > prev_o || ad > prev_d) hunks.push_back({prev_o, ao, prev_d, ad});
    };
    for (const auto& [ao, ad] : common) {
        emit(ao, ad);
        prev_o = ao + 1;
        prev_d = ad + 1;
    }
    emit(n, m);
    return hunks;
}

}  // namespace

std::string_view to_string(VerdictStatus status) {
    switch (status) {
        case VerdictStatus::identical: return "identical";
        case VerdictStatus::reworded: return "reworded";
        case VerdictStatus::missing: return "missing";
        case VerdictStatus::extra: return "extra";
    }
    return "?";
}

double title_similarity(std::string_view a, std::string_view b) {
    if (a.empty() && b.empty()) return 1.0;
    const std::string la = to_lower_ascii(a);
    const std::string lb = to_lower_ascii(b);
    std::vector<std::uint32_t> prev(lb.size() + 1, 0), cur(lb.size() + 1, 0);
    for (std::size_t i = la.size(); i-- > 0;) {
        for (std::size_t j = lb.size(); j-- > 0;) {
            cur[j] = la[i] == lb[j] ? prev[j + 1] + 1 : std::max(prev[j], cur[j + 1]);
        }
        std::swap(prev, cur);
        std::fill(cur.begin(), cur.end(), 0);
    }
    return 2.0 * static_cast<double>(prev[0]) /
           static_cast<double>(la.size() + lb.size());
}

std::vector<SpanDiff> diff_field(std::string_view field, std::string_view original,
                                 std::string_view delivered, const ValenceLexicon* lexicon) {
    if (original == delivered) return {};

    const std::vector<TokenSpan> tok_o = token_spans(original);
    const std::vector<TokenSpan> tok_d = token_spans(delivered);
    const std::vector<std::string> words_o = exact_tokens(original, tok_o);
    const std::vector<std::string> words_d = exact_tokens(delivered, tok_d);

    const auto whole_field_span = [&]() -> std::vector<SpanDiff> {
        return {SpanDiff{std::string(field), 0, std::string(original), std::string(delivered),
                         std::nullopt}};
    };
    if (words_o.empty() || words_d.empty()) return whole_field_span();

    std::vector<Hunk> hunks =
        extract_hunks(lcs_pairs(words_o, words_d), words_o.size(), words_d.size());
    if (hunks.empty()) {
        // Same tokens, different separators; report the whole field.
        return whole_field_span();
    }

    // A one-sided hunk (pure insertion or deletion) absorbs an adjacent
    // common token on both sides so that both fragments stay non-empty and
    // the spans still reconstruct the delivered text.
    for (Hunk& h : hunks) {
        if (h.o1 == h.o2 || h.d1 == h.d2) {
            if (h.o1 > 0 && h.d1 > 0) {
                --h.o1;
                --h.d1;
            } else if (h.o2 < words_o.size() && h.d2 < words_d.size()) {
                ++h.o2;
                ++h.d2;
            } else {
                return whole_field_span();
            }
        }
    }

    std::vector<SpanDiff> spans;
    std::size_t prev_o_token_end = 0;  // expansion may not cross earlier spans
    for (std::size_t hi = 0; hi < hunks.size(); ++hi) {
        Hunk h = hunks[hi];
        std::optional<std::size_t> attributed;

        if (lexicon != nullptr) {
            // Context available for widening: tokens adjacent to the hunk
            // that are equal on both sides, bounded by neighbor hunks.
            std::size_t left_avail = std::min(h.o1 - prev_o_token_end, h.d1);
            const std::size_t next_o = hi + 1 < hunks.size() ? hunks[hi + 1].o1 : words_o.size();
            const std::size_t next_d = hi + 1 < hunks.size() ? hunks[hi + 1].d1 : words_d.size();
            std::size_t right_avail = std::min(next_o - h.o2, next_d - h.d2);
            left_avail = std::min<std::size_t>(left_avail, 8);
            right_avail = std::min<std::size_t>(right_avail, 8);

            auto tokens_lower = [](const std::vector<std::string>& words, std::size_t b,
                                   std::size_t e) {
                std::vector<std::string> out;
                for (std::size_t i = b; i < e; ++i) out.push_back(to_lower_ascii(words[i]));
                return out;
            };

            for (std::size_t pi = 0; pi < lexicon->pairs.size() && !attributed; ++pi) {
                const std::vector<std::string> src = split_tokens_lower(lexicon->pairs[pi].source);
                const std::vector<std::string> rep =
                    split_tokens_lower(lexicon->pairs[pi].replacement);
                const std::size_t o_len = h.o2 - h.o1, d_len = h.d2 - h.d1;
                if (src.size() < o_len || rep.size() < d_len) continue;
                if (src.size() - o_len != rep.size() - d_len) continue;
                const std::size_t total_ext = src.size() - o_len;
                for (std::size_t p = 0; p <= total_ext && !attributed; ++p) {
                    const std::size_t q = total_ext - p;
                    if (p > left_avail || q > right_avail) continue;
                    if (tokens_lower(words_o, h.o1 - p, h.o2 + q) == src &&
                        tokens_lower(words_d, h.d1 - p, h.d2 + q) == rep) {
                        h.o1 -= p;
                        h.d1 -= p;
                        h.o2 += q;
                        h.d2 += q;
                        attributed = pi;
                    }
                }
            }
        }

        SpanDiff span;
        span.field = std::string(field);
        span.offset = tok_o[h.o1].begin;
        span.original = std::string(
            original.substr(tok_o[h.o1].begin, tok_o[h.o2 - 1].end - tok_o[h.o1].begin));
        span.delivered = std::string(
            delivered.substr(tok_d[h.d1].begin, tok_d[h.d2 - 1].end - tok_d[h.d1].begin));
        span.pair_index = attributed;
        spans.push_back(std::move(span));
        prev_o_token_end = h.o2;
    }

    // The spans must replay into the delivered text exactly; if separators
    // around the hunks disagree they cannot, and one whole-field span is the
    // honest answer.
    std::vector<Substitution> replay;
    for (const SpanDiff& s : spans) {
        replay.push_back({s.offset, s.offset + s.original.size(), s.original, s.delivered, 0});
    }
    try {
        if (apply_log(original, replay) != delivered) return whole_field_span();
    } catch (const ValidationError&) {
        return whole_field_span();
    }
    return spans;
}

IntegrityReport verify(const Feed& source, const Feed& delivered,
                       const ValenceLexicon* lexicon, const VerifyOptions& options) {
    const std::size_t n = source.items.size();
    const std::size_t m = delivered.items.size();
    std::vector<std::ptrdiff_t> match_s(n, -1), match_d(m, -1);

    // Pass 1: exact guid. Each delivered item is matched at most once.
    {
        std::unordered_map<std::string, std::vector<std::size_t>> by_guid;
        for (std::size_t j = m; j-- > 0;) {
            if (!delivered.items[j].guid.empty()) by_guid[delivered.items[j].guid].push_back(j);
        }
        for (std::size_t i = 0; i < n; ++i) {
            const std::string& g = source.items[i].guid;
            if (g.empty()) continue;
            auto it = by_guid.find(g);
            if (it == by_guid.end() || it->second.empty()) continue;
            const std::size_t j = it->second.back();
            it->second.pop_back();
            match_s[i] = static_cast<std::ptrdiff_t>(j);
            match_d[j] = static_cast<std::ptrdiff_t>(i);
        }
    }
    // Pass 2: exact link.
    {
        std::unordered_map<std::string, std::vector<std::size_t>> by_link;
        for (std::size_t j = m; j-- > 0;) {
            if (match_d[j] < 0 && !delivered.items[j].link.empty()) {
                by_link[delivered.items[j].link].push_back(j);
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (match_s[i] >= 0 || source.items[i].link.empty()) continue;
            auto it = by_link.find(source.items[i].link);
            if (it == by_link.end() || it->second.empty()) continue;
            const std::size_t j = it->second.back();
            it->second.pop_back();
            match_s[i] = static_cast<std::ptrdiff_t>(j);
            match_d[j] = static_cast<std::ptrdiff_t>(i);
        }
    }
    // Pass 3: title similarity, best pairs first.
    {
        struct Candidate {
            double sim;
            std::size_t i, j;
        };
        std::vector<Candidate> candidates;
        for (std::size_t i = 0; i < n; ++i) {
            if (match_s[i] >= 0) continue;
            for (std::size_t j = 0; j < m; ++j) {
                if (match_d[j] >= 0) continue;
                const double sim =
                    title_similarity(source.items[i].title, delivered.items[j].title);
                if (sim >= options.title_similarity_threshold) candidates.push_back({sim, i, j});
            }
        }
        std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
            if (a.sim != b.sim) return a.sim > b.sim;
            if (a.i != b.i) return a.i < b.i;
            return a.j < b.j;
        });
        for (const Candidate& c : candidates) {
            if (match_s[c.i] >= 0 || match_d[c.j] >= 0) continue;
            match_s[c.i] = static_cast<std::ptrdiff_t>(c.j);
            match_d[c.j] = static_cast<std::ptrdiff_t>(c.i);
        }
    }

    IntegrityReport report;
    report.generated_at = iso_timestamp_now();
    for (std::size_t i = 0; i < n; ++i) {
        const FeedItem& src = source.items[i];
        ItemVerdict verdict;
        verdict.guid = src.guid;
        if (match_s[i] < 0) {
            verdict.status = VerdictStatus::missing;
        } else {
            const FeedItem& del = delivered.items[match_s[i]];
            std::vector<SpanDiff> spans = diff_field("title", src.title, del.title, lexicon);
            const std::string src_desc = src.description.value_or("");
            const std::string del_desc = del.description.value_or("");
            if (src_desc != del_desc) {
                std::vector<SpanDiff> desc =
                    diff_field("description", src_desc, del_desc, lexicon);
                spans.insert(spans.end(), desc.begin(), desc.end());
            }
            if (spans.empty()) {
                verdict.status = VerdictStatus::identical;
            } else {
                verdict.status = VerdictStatus::reworded;
                verdict.spans = std::move(spans);
                for (const SpanDiff& s : verdict.spans) {
                    if (s.pair_index) verdict.attribution.push_back(*s.pair_index);
                }
                std::sort(verdict.attribution.begin(), verdict.attribution.end());
                verdict.attribution.erase(
                    std::unique(verdict.attribution.begin(), verdict.attribution.end()),
                    verdict.attribution.end());
            }
        }
        report.verdicts.push_back(std::move(verdict));
    }
    for (std::size_t j = 0; j < m; ++j) {
        if (match_d[j] >= 0) continue;
        ItemVerdict verdict;
        verdict.guid = delivered.items[j].guid;
        verdict.status = VerdictStatus::extra;
        report.verdicts.push_back(std::move(verdict));
    }

    for (const ItemVerdict& v : report.verdicts) {
        switch (v.status) {
            case VerdictStatus::identical: ++report.count_identical; break;
            case VerdictStatus::reworded: ++report.count_reworded; break;
            case VerdictStatus::missing: ++report.count_missing; break;
            case VerdictStatus::extra: ++report.count_extra; break;
        }
    }
    return report;
}

nlohmann::ordered_json report_to_json(const IntegrityReport& report) {
    nlohmann::ordered_json j;
    j["source_url"] = report.source_url;
    j["delivered_url"] = report.delivered_url;
    j["generated_at"] = report.generated_at;
    if (report.fetch_error) j["fetch_error"] = *report.fetch_error;
    nlohmann::ordered_json verdicts = nlohmann::ordered_json::array();
    for (const ItemVerdict& v : report.verdicts) {
        nlohmann::ordered_json jv;
        jv["guid"] = v.guid;
        jv["status"] = std::string(to_string(v.status));
        nlohmann::ordered_json spans = nlohmann::ordered_json::array();
        for (const SpanDiff& s : v.spans) {
            nlohmann::ordered_json js;
            js["field"] = s.field;
            js["offset"] = s.offset;
            js["original"] = s.original;
            js["delivered"] = s.delivered;
            if (s.pair_index) js["pair_index"] = *s.pair_index;
            spans.push_back(std::move(js));
        }
        jv["detected_spans"] = std::move(spans);
        jv["attribution"] = v.attribution;
        verdicts.push_back(std::move(jv));
    }
    j["verdicts"] = std::move(verdicts);
    j["summary"] = {{"identical", report.count_identical},
                    {"reworded", report.count_reworded},
                    {"missing", report.count_missing},
                    {"extra", report.count_extra}};
    return j;
}

std::string render_report_table(const IntegrityReport& report) {
    std::ostringstream os;
    if (report.fetch_error) {
        os << "fetch error: " << *report.fetch_error << '\n';
        return os.str();
    }
    os << "status     guid                         detected spans\n";
    os << "---------  ---------------------------  --------------\n";
    for (const ItemVerdict& v : report.verdicts) {
        char head[64];
        std::snprintf(head, sizeof(head), "%-9s  %-27s  ", std::string(to_string(v.status)).c_str(),
                      v.guid.c_str());
        os << head;
        if (v.spans.empty()) {
            os << "-";
        }
        for (std::size_t i = 0; i < v.spans.size(); ++i) {
            if (i) os << "; ";
            const SpanDiff& s = v.spans[i];
            os << s.field << "[" << s.offset << "]: \"" << s.original << "\" -> \""
               << s.delivered << "\"";
            if (s.pair_index) os << " (pair " << *s.pair_index << ")";
        }
        os << '\n';
    }
    os << "summary: " << report.count_reworded << " reworded, " << report.count_identical
       << " identical, " << report.count_missing << " missing, " << report.count_extra
       << " extra\n";
    return os.str();
}

FeedWatcher::FeedWatcher(std::string source_url, std::string delivered_url,
                         const ValenceLexicon* lexicon, WatchOptions watch,
                         VerifyOptions verify)
    : source_url_(std::move(source_url)),
      delivered_url_(std::move(delivered_url)),
      lexicon_(lexicon),
      watch_(std::move(watch)),
      verify_(verify) {}

void FeedWatcher::run(const std::function<void(const IntegrityReport&)>& on_report) {
    for (std::size_t round = 0; round < watch_.rounds; ++round) {
        if (round > 0) {
            std::this_thread::sleep_for(std::chrono::duration<double>(watch_.interval_seconds));
        }
        IntegrityReport report;
        try {
            const Feed source = parse_feed(fetch_url(source_url_));
            const Feed delivered = parse_feed(fetch_url(delivered_url_));
            report = verify(source, delivered, lexicon_, verify_);
        } catch (const Error& e) {
            report.fetch_error = e.what();
            report.generated_at = iso_timestamp_now();
        }
        report.source_url = source_url_;
        report.delivered_url = delivered_url_;

        if (!watch_.log_path.empty()) {
            persisted_lines_.push_back(report_to_json(report).dump());
            if (persisted_lines_.size() > watch_.keep_last) {
                persisted_lines_.erase(persisted_lines_.begin(),
                                       persisted_lines_.end() -
                                           static_cast<std::ptrdiff_t>(watch_.keep_last));
            }
            std::ofstream out(watch_.log_path, std::ios::binary | std::ios::trunc);
            for (const std::string& line : persisted_lines_) out << line << '\n';
        }
        on_report(report);
    }
}

}  // namespace mim
