#include "mim/rss.hpp"

#include <algorithm>
#include <cstdint>

#include "mim/errors.hpp"
#include "mim/text.hpp"

namespace mim {

namespace {

bool is_name_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
           c == ':' || c == '_' || c == '-' || c == '.';
}

void append_utf8(std::string& out, std::uint32_t cp) {
    if (cp <= 0x7F) {
        out.push_back(static_cast<char>(cp));
    } else if (cp <= 0x7FF) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp <= 0xFFFF) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

class XmlScanner {
public:
    explicit XmlScanner(std::string_view src) : src_(src) {
        // UTF-8 BOM
        if (src_.substr(0, 3) == "\xEF\xBB\xBF") pos_ = 3;
    }

    std::size_t pos() const { return pos_; }
    bool at_end() const { return pos_ >= src_.size(); }

    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(pos_, msg); }
    [[noreturn]] void fail_at(std::size_t at, const std::string& msg) const {
        throw ParseError(at, msg);
    }

    void skip_ws() {
        while (pos_ < src_.size() && is_space_char(src_[pos_])) ++pos_;
    }

    bool starts_with(std::string_view s) const { return src_.substr(pos_, s.size()) == s; }

    // Whitespace, comments, processing instructions, and a DOCTYPE, in any
    // order. Used for the prolog and between elements.
    void skip_misc() {
        for (;;) {
            skip_ws();
            if (starts_with("<?")) {
                skip_until("?>", "unterminated processing instruction");
            } else if (starts_with("<!--")) {
                skip_comment();
            } else if (starts_with("<!DOCTYPE")) {
                skip_doctype();
            } else {
                return;
            }
        }
    }

    void skip_comment() {
        const std::size_t at = pos_;
        pos_ += 4;
        const std::size_t close = src_.find("-->", pos_);
        if (close == std::string_view::npos) fail_at(at, "unterminated comment");
        pos_ = close + 3;
    }

    struct OpenTag {
        std::string name;
        bool self_closing = false;
        std::size_t begin = 0;
    };

    // pos_ must sit on '<' of an ordinary open tag.
    OpenTag read_open_tag() {
        OpenTag tag;
        tag.begin = pos_;
        if (at_end() || src_[pos_] != '<') fail("expected '<'");
        ++pos_;
        tag.name = read_name();
        // attributes
        for (;;) {
            skip_ws();
            if (at_end()) fail_at(tag.begin, "unterminated tag <" + tag.name + ">");
            const char c = src_[pos_];
            if (c == '>') {
                ++pos_;
                return tag;
            }
            if (c == '/') {
                ++pos_;
                if (at_end() || src_[pos_] != '>') fail("expected '/>'");
                ++pos_;
                tag.self_closing = true;
                return tag;
            }
            read_name();
            skip_ws();
            if (!at_end() && src_[pos_] == '=') {
                ++pos_;
                skip_ws();
                if (at_end() || (src_[pos_] != '"' && src_[pos_] != '\'')) {
                    fail("expected quoted attribute value");
                }
                const char quote = src_[pos_];
                const std::size_t close = src_.find(quote, pos_ + 1);
                if (close == std::string_view::npos) fail("unterminated attribute value");
                pos_ = close + 1;
            }
        }
    }

    void read_close_tag(const std::string& name) {
        const std::size_t at = pos_;
        if (!starts_with("</")) fail("expected closing tag");
        pos_ += 2;
        const std::string got = read_name();
        if (got != name) {
            fail_at(at, "mismatched closing tag: expected </" + name + ">, got </" + got + ">");
        }
        skip_ws();
        if (at_end() || src_[pos_] != '>') fail("expected '>'");
        ++pos_;
    }

    // Consumes a whole element (tag already read) without interpreting it.
    void skip_element(const OpenTag& tag) {
        if (tag.self_closing) return;
        std::size_t depth = 1;
        while (depth > 0) {
            if (at_end()) fail_at(tag.begin, "unterminated element <" + tag.name + ">");
            if (starts_with("<!--")) {
                skip_comment();
            } else if (starts_with("<![CDATA[")) {
                skip_until("]]>", "unterminated CDATA section");
            } else if (starts_with("</")) {
                pos_ += 2;
                read_name();
                skip_ws();
                if (at_end() || src_[pos_] != '>') fail("expected '>'");
                ++pos_;
                --depth;
            } else if (starts_with("<?")) {
                skip_until("?>", "unterminated processing instruction");
            } else if (src_[pos_] == '<') {
                const OpenTag inner = read_open_tag();
                if (!inner.self_closing) ++depth;
            } else {
                ++pos_;
            }
        }
    }

    // Text content of a leaf element: character data, entity references and
    // CDATA sections until the matching close tag. Nested markup is outside
    // the subset this parser accepts.
    RawContent read_text_content(const std::string& element_name) {
        RawContent content;
        content.content_begin = pos_;
        for (;;) {
            if (at_end()) fail("unterminated <" + element_name + "> content");
            if (starts_with("</")) {
                content.content_end = pos_;
                read_close_tag(element_name);
                return content;
            }
            if (starts_with("<![CDATA[")) {
                const std::size_t open = pos_;
                pos_ += 9;
                const std::size_t close = src_.find("]]>", pos_);
                if (close == std::string_view::npos) {
                    fail_at(open, "unterminated CDATA section");
                }
                content.segments.push_back({open, close + 3, true});
                for (std::size_t p = pos_; p < close; ++p) {
                    content.decoded.push_back(src_[p]);
                    content.byte_map.emplace_back(p, p + 1);
                }
                pos_ = close + 3;
                continue;
            }
            if (starts_with("<!--")) {
                skip_comment();
                continue;
            }
            if (src_[pos_] == '<') {
                fail("unexpected element inside <" + element_name + ">");
            }
            // plain character run, with entity decoding
            const std::size_t seg_begin = pos_;
            while (!at_end() && src_[pos_] != '<') {
                if (src_[pos_] == '&') {
                    decode_entity(content);
                } else {
                    content.decoded.push_back(src_[pos_]);
                    content.byte_map.emplace_back(pos_, pos_ + 1);
                    ++pos_;
                }
            }
            content.segments.push_back({seg_begin, pos_, false});
        }
    }

    std::string read_name() {
        const std::size_t b = pos_;
        while (pos_ < src_.size() && is_name_char(src_[pos_])) ++pos_;
        if (pos_ == b) fail("expected a name");
        return std::string(src_.substr(b, pos_ - b));
    }

private:
    void skip_until(std::string_view close, const std::string& err) {
        const std::size_t at = pos_;
        const std::size_t found = src_.find(close, pos_);
        if (found == std::string_view::npos) fail_at(at, err);
        pos_ = found + close.size();
    }

    void skip_doctype() {
        const std::size_t at = pos_;
        std::size_t bracket = 0;
        while (pos_ < src_.size()) {
            const char c = src_[pos_++];
            if (c == '[') ++bracket;
            else if (c == ']' && bracket > 0) --bracket;
            else if (c == '>' && bracket == 0) return;
        }
        fail_at(at, "unterminated DOCTYPE");
    }

    void decode_entity(RawContent& content) {
        const std::size_t amp = pos_;
        const std::size_t semi = src_.find(';', amp);
        if (semi == std::string_view::npos || semi - amp > 12) {
            fail_at(amp, "unterminated entity reference");
        }
        const std::string_view body = src_.substr(amp + 1, semi - amp - 1);
        std::string decoded;
        if (body == "amp") decoded = "&";
        else if (body == "lt") decoded = "<";
        else if (body == "gt") decoded = ">";
        else if (body == "quot") decoded = "\"";
        else if (body == "apos") decoded = "'";
        else if (!body.empty() && body[0] == '#') {
            std::uint32_t cp = 0;
            bool ok = body.size() > 1;
            if (body.size() > 2 && (body[1] == 'x' || body[1] == 'X')) {
                for (std::size_t i = 2; i < body.size() && ok; ++i) {
                    const char c = ascii_lower(body[i]);
                    if (c >= '0' && c <= '9') cp = cp * 16 + (c - '0');
                    else if (c >= 'a' && c <= 'f') cp = cp * 16 + (c - 'a' + 10);
                    else ok = false;
                }
            } else {
                for (std::size_t i = 1; i < body.size() && ok; ++i) {
                    if (body[i] >= '0' && body[i] <= '9') cp = cp * 10 + (body[i] - '0');
                    else ok = false;
                }
            }
            if (!ok || cp == 0 || cp > 0x10FFFF) {
                fail_at(amp, "bad numeric character reference");
            }
            append_utf8(decoded, cp);
        } else {
            fail_at(amp, "unknown entity &" + std::string(body) + ";");
        }
        for (char c : decoded) {
            content.decoded.push_back(c);
            content.byte_map.emplace_back(amp, semi + 1);
        }
        pos_ = semi + 1;
    }

    std::string_view src_;
    std::size_t pos_ = 0;
};

FeedItem parse_item(XmlScanner& scan, RawItem& raw, std::size_t item_index) {
    FeedItem item;
    for (;;) {
        scan.skip_ws();
        if (scan.starts_with("<!--")) {
            scan.skip_comment();
            continue;
        }
        if (scan.starts_with("</")) {
            scan.read_close_tag("item");
            return item;
        }
        if (scan.at_end()) scan.fail("unterminated <item>");
        const XmlScanner::OpenTag tag = scan.read_open_tag();
        if (tag.self_closing) continue;
        if (tag.name == "title") {
            raw.title = scan.read_text_content(tag.name);
            item.title = raw.title.decoded;
        } else if (tag.name == "link") {
            item.link = scan.read_text_content(tag.name).decoded;
        } else if (tag.name == "guid") {
            item.guid = scan.read_text_content(tag.name).decoded;
        } else if (tag.name == "description") {
            raw.description = scan.read_text_content(tag.name);
            item.description = raw.description->decoded;
        } else if (tag.name == "pubDate") {
            item.pub_date = scan.read_text_content(tag.name).decoded;
        } else {
            scan.skip_element(tag);
        }
    }
    (void)item_index;
}

}  // namespace

Feed parse_feed(std::string_view bytes) {
    XmlScanner scan(bytes);
    scan.skip_misc();
    if (scan.at_end()) scan.fail("empty document");

    const XmlScanner::OpenTag root = scan.read_open_tag();
    if (root.name != "rss") {
        throw ValidationError("not an RSS document (root element is <" + root.name + ">)");
    }
    if (root.self_closing) throw ValidationError("RSS document has no channel element");

    Feed feed;
    auto raw = std::make_shared<RawFeedDoc>();
    raw->bytes = std::string(bytes);

    bool channel_seen = false;
    for (;;) {
        scan.skip_ws();
        if (scan.starts_with("<!--")) {
            scan.skip_comment();
            continue;
        }
        if (scan.starts_with("</")) {
            scan.read_close_tag("rss");
            break;
        }
        if (scan.at_end()) scan.fail("unterminated <rss>");
        const XmlScanner::OpenTag tag = scan.read_open_tag();
        if (tag.name != "channel") {
            scan.skip_element(tag);
            continue;
        }
        if (tag.self_closing) break;
        channel_seen = true;

        for (;;) {
            const std::size_t ws_start = scan.pos();
            scan.skip_ws();
            if (scan.starts_with("<!--")) {
                scan.skip_comment();
                continue;
            }
            if (scan.starts_with("</")) {
                scan.read_close_tag("channel");
                break;
            }
            if (scan.at_end()) scan.fail("unterminated <channel>");
            const XmlScanner::OpenTag child = scan.read_open_tag();
            if (child.name == "item") {
                if (child.self_closing) {
                    throw ValidationError("item " + std::to_string(feed.items.size()) +
                                          " has no title");
                }
                RawItem raw_item;
                raw_item.outer_begin = ws_start;
                raw_item.begin = child.begin;
                FeedItem item = parse_item(scan, raw_item, feed.items.size());
                raw_item.end = scan.pos();
                if (item.title.empty()) {
                    throw ValidationError("item " + std::to_string(feed.items.size()) +
                                          " has no title");
                }
                if (item.guid.empty()) item.guid = item.link;
                item.raw_index = static_cast<int>(raw->items.size());
                raw->items.push_back(std::move(raw_item));
                feed.items.push_back(std::move(item));
            } else if (child.self_closing) {
                continue;
            } else if (child.name == "title") {
                feed.channel_title = scan.read_text_content(child.name).decoded;
            } else if (child.name == "link") {
                feed.channel_link = scan.read_text_content(child.name).decoded;
            } else if (child.name == "description") {
                feed.channel_description = scan.read_text_content(child.name).decoded;
            } else {
                scan.skip_element(child);
            }
        }
        break;
    }
    if (!channel_seen) throw ValidationError("RSS document has no channel element");

    feed.raw = std::move(raw);
    return feed;
}

std::string xml_escape(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

namespace {

struct RawEdit {
    std::size_t begin = 0;
    std::size_t end = 0;
    std::string text;
};

// Splices one field edit. Returns false when the span cannot be patched
// surgically (it crosses text/CDATA segment borders), in which case the
// caller rewrites the whole content range.
bool splice_substitution(const RawContent& content, const Substitution& sub,
                         std::vector<RawEdit>& edits) {
    if (sub.end > content.byte_map.size() || sub.start >= sub.end) return false;
    const std::size_t raw_begin = content.byte_map[sub.start].first;
    const std::size_t raw_end = content.byte_map[sub.end - 1].second;
    for (const ContentSegment& seg : content.segments) {
        if (raw_begin >= seg.raw_begin && raw_end <= seg.raw_end) {
            if (seg.cdata) {
                if (sub.replacement.find("]]>") != std::string::npos) return false;
                edits.push_back({raw_begin, raw_end, sub.replacement});
            } else {
                edits.push_back({raw_begin, raw_end, xml_escape(sub.replacement)});
            }
            return true;
        }
    }
    return false;
}

void splice_field(const RawContent& content, const std::string& new_text,
                  const std::vector<Substitution>& subs, std::vector<RawEdit>& edits) {
    if (content.decoded == new_text) return;
    std::vector<RawEdit> local;
    bool surgical = !subs.empty();
    for (const Substitution& sub : subs) {
        if (!splice_substitution(content, sub, local)) {
            surgical = false;
            break;
        }
    }
    if (surgical) {
        edits.insert(edits.end(), local.begin(), local.end());
    } else {
        edits.push_back({content.content_begin, content.content_end, xml_escape(new_text)});
    }
}

std::string serialize_canonical(const Feed& feed) {
    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<rss version=\"2.0\">\n  <channel>\n";
    out += "    <title>" + xml_escape(feed.channel_title) + "</title>\n";
    out += "    <link>" + xml_escape(feed.channel_link) + "</link>\n";
    out += "    <description>" + xml_escape(feed.channel_description) + "</description>\n";
    for (const FeedItem& item : feed.items) {
        out += "    <item>\n";
        out += "      <title>" + xml_escape(item.title) + "</title>\n";
        if (!item.link.empty()) out += "      <link>" + xml_escape(item.link) + "</link>\n";
        if (!item.guid.empty()) out += "      <guid>" + xml_escape(item.guid) + "</guid>\n";
        if (item.description) {
            out += "      <description>" + xml_escape(*item.description) + "</description>\n";
        }
        if (item.pub_date) {
            out += "      <pubDate>" + xml_escape(*item.pub_date) + "</pubDate>\n";
        }
        out += "    </item>\n";
    }
    out += "  </channel>\n</rss>\n";
    return out;
}

}  // namespace

std::string serialize_feed(const Feed& feed) {
    const bool can_splice =
        feed.raw && std::all_of(feed.items.begin(), feed.items.end(), [&](const FeedItem& i) {
            return i.raw_index >= 0 &&
                   static_cast<std::size_t>(i.raw_index) < feed.raw->items.size();
        });
    if (!can_splice) return serialize_canonical(feed);

    const RawFeedDoc& raw = *feed.raw;
    std::vector<RawEdit> edits;
    std::vector<bool> present(raw.items.size(), false);

    for (const FeedItem& item : feed.items) {
        const RawItem& raw_item = raw.items[item.raw_index];
        present[item.raw_index] = true;
        if (!item.dirty) continue;
        splice_field(raw_item.title, item.title, item.title_edits, edits);
        if (raw_item.description && item.description) {
            splice_field(*raw_item.description, *item.description, item.description_edits,
                         edits);
        }
    }
    for (std::size_t i = 0; i < raw.items.size(); ++i) {
        if (!present[i]) edits.push_back({raw.items[i].outer_begin, raw.items[i].end, ""});
    }

    std::sort(edits.begin(), edits.end(),
              [](const RawEdit& a, const RawEdit& b) { return a.begin < b.begin; });

    std::string out;
    out.reserve(raw.bytes.size());
    std::size_t cursor = 0;
    for (const RawEdit& e : edits) {
        out.append(raw.bytes, cursor, e.begin - cursor);
        out.append(e.text);
        cursor = e.end;
    }
    out.append(raw.bytes, cursor, raw.bytes.size() - cursor);
    return out;
}

bool structurally_equal(const Feed& a, const Feed& b) {
    if (a.channel_title != b.channel_title || a.channel_link != b.channel_link ||
        a.channel_description != b.channel_description || a.items.size() != b.items.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.items.size(); ++i) {
        if (!a.items[i].same_content(b.items[i])) return false;
    }
    return true;
}

}  // namespace mim
