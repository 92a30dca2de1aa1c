#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace mim {

// One news release as ingested from a local archive (a stand-in for scraping
// the publisher's site; archives are reproducible, live pages are not).
struct NewsRelease {
    std::string id;
    std::string published;  // ISO-8601 calendar date
    std::string title;
    std::string body;
};

// One sentence of one release: the unit of all downstream analysis.
struct SentenceRecord {
    std::string release_id;
    std::size_t index = 0;  // 0-based, dense per release
    std::string text;
    std::vector<std::string> tokens;  // lowercase, stopwords removed

    bool operator==(const SentenceRecord&) const = default;
};

// The bundled general English list plus the corpus-specific words that
// dominate every release and would otherwise swamp the term statistics.
struct StopwordPolicy {
    std::unordered_set<std::string> general;
    std::unordered_set<std::string> domain;

    static StopwordPolicy bundled();

    bool contains(std::string_view token) const {
        std::string t(token);
        return general.count(t) > 0 || domain.count(t) > 0;
    }
};

// Frozen general stopword list (see stopwords.cpp for the full list).
std::span<const std::string_view> general_stopwords();

// The five corpus-specific words removed by default.
std::span<const std::string_view> domain_stopwords();

// Abbreviations that never end a sentence, used by segment_sentences.
std::span<const std::string_view> sentence_abbreviations();

// Loads an archive directory: an index.json array of
// {id, title, published, body_path} entries plus the referenced plain-text
// body files. Releases come back in index order.
std::vector<NewsRelease> load_archive(const std::filesystem::path& dir);

// Splits a release body into sentences. Split points are '.', '!' or '?'
// followed by whitespace and an uppercase letter (or end of text), unless
// the preceding token is a known abbreviation. Joining the produced texts
// recovers the body up to whitespace.
std::vector<SentenceRecord> segment_sentences(const NewsRelease& release);

// Lowercase tokens (letters/digits/apostrophes; hyphens split) with every
// policy word removed. Order preserved.
std::vector<std::string> tokenize(std::string_view text, const StopwordPolicy& policy);

// segment_sentences + tokenize over a whole archive.
std::vector<SentenceRecord> build_corpus(const std::vector<NewsRelease>& releases,
                                         const StopwordPolicy& policy);

// Corpus export format: JSON lines, one SentenceRecord per line.
void write_corpus_jsonl(const std::vector<SentenceRecord>& corpus, std::ostream& os);
std::vector<SentenceRecord> read_corpus_jsonl(std::istream& is);
std::vector<SentenceRecord> read_corpus_jsonl_file(const std::filesystem::path& path);

}  // namespace mim
