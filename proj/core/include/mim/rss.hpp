#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mim/reword.hpp"

namespace mim {

// parse_feed remembers where every item and every rewritable text field sat
// in the source bytes. serialize_feed then splices edits surgically: an
// untouched item round-trips byte-identical, a reworded item changes only
// inside the replaced spans, and a suppressed item vanishes together with
// the whitespace run that preceded it.

struct ContentSegment {
    std::size_t raw_begin = 0;
    std::size_t raw_end = 0;
    bool cdata = false;
};

struct RawContent {
    std::string decoded;
    // Per decoded byte: the source byte range that produced it (an entity
    // reference maps several decoded bytes to one raw range).
    std::vector<std::pair<std::size_t, std::size_t>> byte_map;
    std::size_t content_begin = 0;
    std::size_t content_end = 0;
    std::vector<ContentSegment> segments;
};

struct RawItem {
    std::size_t outer_begin = 0;  // start of the whitespace run before <item>
    std::size_t begin = 0;        // '<' of <item>
    std::size_t end = 0;          // one past '>' of </item>
    RawContent title;
    std::optional<RawContent> description;
};

struct RawFeedDoc {
    std::string bytes;
    std::vector<RawItem> items;
};

struct FeedItem {
    std::string guid;  // falls back to link when the feed omits it
    std::string title;
    std::string link;
    std::optional<std::string> description;
    std::optional<std::string> pub_date;  // passed through verbatim

    // Raw-document bookkeeping; -1 for synthetic items.
    int raw_index = -1;
    std::vector<Substitution> title_edits;
    std::vector<Substitution> description_edits;
    bool dirty = false;

    bool same_content(const FeedItem& other) const {
        return guid == other.guid && title == other.title && link == other.link &&
               description == other.description && pub_date == other.pub_date;
    }
};

struct Feed {
    std::string channel_title;
    std::string channel_link;
    std::string channel_description;
    std::vector<FeedItem> items;  // upstream order preserved
    std::shared_ptr<const RawFeedDoc> raw;
};

// RSS 2.0 subset: channel title/link/description, item
// title/link/guid/description/pubDate. Unknown elements are skipped but
// survive serialization of untouched items via the raw document. Malformed
// XML raises ParseError with a byte offset; a document without a channel
// raises ValidationError.
Feed parse_feed(std::string_view bytes);

// Raw-splicing serializer for parsed feeds; canonical RSS 2.0 generation
// for synthetic ones. parse_feed(serialize_feed(f)) is structurally equal
// to f.
std::string serialize_feed(const Feed& feed);

// Decoded-field comparison (chan fields plus per-item guid/title/link/
// description/pubDate); ignores raw bookkeeping.
bool structurally_equal(const Feed& a, const Feed& b);

std::string xml_escape(std::string_view s);

}  // namespace mim
