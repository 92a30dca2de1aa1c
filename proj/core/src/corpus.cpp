#include "mim/corpus.hpp"

#include <fstream>
#include <sstream>
#include <unordered_map>

#include "json.hpp"
#include "mim/errors.hpp"
#include "mim/text.hpp"

namespace mim {

namespace {

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// True when the whitespace-delimited token ending at body[dot] is one of the
// frozen abbreviations ("Inc.", "U.S.", ...).
bool abbreviation_before(std::string_view body, std::size_t dot) {
    std::size_t b = dot;
    while (b > 0 && !is_space_char(body[b - 1])) --b;
    std::string token = to_lower_ascii(body.substr(b, dot - b + 1));
    for (std::string_view a : sentence_abbreviations()) {
        if (token == a) return true;
    }
    return false;
}

}  // namespace

std::vector<NewsRelease> load_archive(const std::filesystem::path& dir) {
    const std::filesystem::path index_path = dir / "index.json";
    if (!std::filesystem::exists(index_path)) {
        throw IoError("archive index not found: " + index_path.string());
    }

    nlohmann::json index;
    try {
        index = nlohmann::json::parse(read_text_file(index_path));
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(e.byte, "archive index is not valid JSON: " + std::string(e.what()));
    }
    if (!index.is_array()) {
        throw ValidationError("archive index must be a JSON array of releases");
    }

    std::vector<NewsRelease> releases;
    std::unordered_set<std::string> seen;
    releases.reserve(index.size());
    for (const auto& entry : index) {
        if (!entry.is_object() || !entry.contains("id") || !entry.contains("body_path")) {
            throw ValidationError("archive index entry missing id or body_path");
        }
        NewsRelease r;
        r.id = entry.at("id").get<std::string>();
        r.title = entry.value("title", std::string{});
        r.published = entry.value("published", std::string{});
        if (r.id.empty()) throw ValidationError("archive index entry has empty id");
        if (!seen.insert(r.id).second) {
            throw ValidationError("duplicate release id in archive index: \"" + r.id + "\"");
        }
        const std::filesystem::path body_path =
            dir / entry.at("body_path").get<std::string>();
        try {
            r.body = read_text_file(body_path);
        } catch (const IoError& e) {
            throw IoError("release \"" + r.id + "\": " + e.what());
        }
        if (trim(r.body).empty()) {
            throw ValidationError("release \"" + r.id + "\" has an empty body");
        }
        releases.push_back(std::move(r));
    }
    return releases;
}

std::vector<SentenceRecord> segment_sentences(const NewsRelease& release) {
    const std::string& body = release.body;
    std::vector<SentenceRecord> out;

    std::size_t start = 0;
    auto flush = [&](std::size_t end) {
        std::string text = trim(std::string_view(body).substr(start, end - start));
        if (!text.empty()) {
            out.push_back({release.id, out.size(), std::move(text), {}});
        }
        start = end;
    };

    for (std::size_t i = 0; i < body.size(); ++i) {
        const char c = body[i];
        if (c != '.' && c != '!' && c != '?') continue;
        std::size_t j = i + 1;
        while (j < body.size() && is_space_char(body[j])) ++j;
        const bool at_end = j == body.size();
        const bool ws_then_upper = j > i + 1 && j < body.size() && is_ascii_upper(body[j]);
        if (!at_end && !ws_then_upper) continue;
        if (c == '.' && abbreviation_before(body, i)) continue;
        flush(i + 1);
    }
    if (start < body.size()) flush(body.size());
    return out;
}

std::vector<std::string> tokenize(std::string_view text, const StopwordPolicy& policy) {
    std::vector<std::string> out;
    for (const TokenSpan& span : token_spans(text)) {
        std::string tok = to_lower_ascii(text.substr(span.begin, span.end - span.begin));
        if (!policy.contains(tok)) out.push_back(std::move(tok));
    }
    return out;
}

std::vector<SentenceRecord> build_corpus(const std::vector<NewsRelease>& releases,
                                         const StopwordPolicy& policy) {
    std::vector<SentenceRecord> corpus;
    for (const NewsRelease& release : releases) {
        std::vector<SentenceRecord> sentences = segment_sentences(release);
        for (SentenceRecord& s : sentences) {
            s.tokens = tokenize(s.text, policy);
            corpus.push_back(std::move(s));
        }
    }
    return corpus;
}

void write_corpus_jsonl(const std::vector<SentenceRecord>& corpus, std::ostream& os) {
    for (const SentenceRecord& s : corpus) {
        nlohmann::ordered_json line;
        line["release_id"] = s.release_id;
        line["index"] = s.index;
        line["text"] = s.text;
        line["tokens"] = s.tokens;
        os << line.dump() << '\n';
    }
}

std::vector<SentenceRecord> read_corpus_jsonl(std::istream& is) {
    std::vector<SentenceRecord> corpus;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw ParseError(e.byte, "corpus line " + std::to_string(line_no) +
                                         " is not valid JSON");
        }
        SentenceRecord s;
        try {
            s.release_id = j.at("release_id").get<std::string>();
            s.index = j.at("index").get<std::size_t>();
            s.text = j.at("text").get<std::string>();
            s.tokens = j.at("tokens").get<std::vector<std::string>>();
        } catch (const nlohmann::json::exception& e) {
            throw ValidationError("corpus line " + std::to_string(line_no) + ": " + e.what());
        }
        corpus.push_back(std::move(s));
    }
    return corpus;
}

std::vector<SentenceRecord> read_corpus_jsonl_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read corpus file: " + path.string());
    return read_corpus_jsonl(in);
}

}  // namespace mim
