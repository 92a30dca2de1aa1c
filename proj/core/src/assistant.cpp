#include "mim/assistant.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <sstream>

#include "mim/errors.hpp"
#include "mim/fetch.hpp"
#include "mim/text.hpp"

namespace mim {

namespace {

std::string iso_timestamp_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace

std::optional<UtteranceParse> parse_utterance(std::string_view text,
                                              const AssistantConfig& config) {
    const NormalizedText norm = normalize_whitespace(text);
    const std::string& n = norm.text;

    // Wake word: the first token, matched case-insensitively.
    std::size_t i = 0;
    while (i < n.size() && !is_token_char(n[i])) ++i;
    std::size_t wake_end = i;
    while (wake_end < n.size() && is_token_char(n[wake_end])) ++wake_end;
    const std::string wake = n.substr(i, wake_end - i);
    const bool addressed = std::any_of(
        config.wake_words.begin(), config.wake_words.end(),
        [&](const std::string& w) { return iequals_ascii(w, wake); });
    if (!addressed) return std::nullopt;

    UtteranceParse parse;
    parse.wake_word = wake;

    // Optional comma after the wake word.
    i = wake_end;
    while (i < n.size() && (n[i] == ' ' || n[i] == ',')) ++i;

    // Trigger: longest matching phrase from the fixed set.
    std::size_t trigger_len = 0;
    for (const std::string& t : config.triggers) {
        const std::string phrase = collapse_whitespace(t);
        if (phrase.size() <= trigger_len || i + phrase.size() > n.size()) continue;
        if (!iequals_ascii(n.substr(i, phrase.size()), phrase)) continue;
        const std::size_t end = i + phrase.size();
        if (end < n.size() && is_token_char(n[end])) continue;
        trigger_len = phrase.size();
    }
    if (trigger_len == 0) {
        throw ValidationError("unrecognized utterance: no trigger phrase in \"" +
                              std::string(text) + "\"");
    }
    parse.trigger_phrase = n.substr(i, trigger_len);
    i += trigger_len;

    // Invocation: the first token after the trigger that is not a filler.
    while (i < n.size()) {
        while (i < n.size() && !is_token_char(n[i])) ++i;
        std::size_t end = i;
        while (end < n.size() && is_token_char(n[end])) ++end;
        if (end == i) break;
        const std::string token = to_lower_ascii(n.substr(i, end - i));
        const bool filler = std::any_of(config.fillers.begin(), config.fillers.end(),
                                        [&](const std::string& f) { return f == token; });
        if (!filler) {
            parse.invocation_name = token;
            return parse;
        }
        i = end;
    }
    throw ValidationError("unrecognized utterance: no invocation name in \"" +
                          std::string(text) + "\"");
}

std::string compose_briefing_text(const std::string& title_phrase,
                                  const std::vector<std::string>& titles) {
    if (titles.empty()) return title_phrase + ".";
    std::string out = title_phrase + ", ";
    for (std::size_t i = 0; i < titles.size(); ++i) {
        if (i) out += ". ";
        out += titles[i];
    }
    out += ".";
    return out;
}

void SkillRegistry::register_skill(SkillRegistration reg) {
    reg.invocation_name = to_lower_ascii(reg.invocation_name);
    if (reg.invocation_name.empty()) {
        throw ValidationError("skill registration needs an invocation name");
    }
    if (find(reg.invocation_name) != nullptr) {
        throw ValidationError("invocation name already registered: \"" +
                              reg.invocation_name + "\"");
    }
    skills_.push_back(std::move(reg));
}

const SkillRegistration* SkillRegistry::find(const std::string& invocation_name) const {
    const std::string name = to_lower_ascii(invocation_name);
    for (const SkillRegistration& s : skills_) {
        if (s.invocation_name == name) return &s;
    }
    return nullptr;
}

SkillRegistry SkillRegistry::from_json(const nlohmann::json& j) {
    if (!j.is_array()) throw ValidationError("registry must be a JSON array of skills");
    SkillRegistry registry;
    for (const auto& entry : j) {
        SkillRegistration reg;
        try {
            reg.invocation_name = entry.at("invocation_name").get<std::string>();
            reg.endpoint_url = entry.at("endpoint_url").get<std::string>();
            reg.title_phrase = entry.value("title_phrase", std::string{});
        } catch (const nlohmann::json::exception& e) {
            throw ValidationError(std::string("bad skill registration: ") + e.what());
        }
        registry.register_skill(std::move(reg));
    }
    return registry;
}

SkillRegistry SkillRegistry::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read registry file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(buf.str());
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(e.byte, "registry file is not valid JSON");
    }
    return from_json(j);
}

BriefingResponse Assistant::run_briefing(std::string_view utterance) const {
    BriefingResponse response;

    // An addressed-but-unrecognizable utterance propagates as a
    // ValidationError; only a missing wake word is silently ignored.
    const std::optional<UtteranceParse> parse = parse_utterance(utterance, config_);
    if (!parse) {
        response.status = BriefingResponse::Status::not_addressed;
        response.message = "(not addressed)";
        return response;
    }

    const SkillRegistration* skill = registry_.find(parse->invocation_name);
    if (skill == nullptr) {
        response.status = BriefingResponse::Status::skill_not_found;
        response.message = "skill not found: \"" + parse->invocation_name + "\"";
        return response;
    }

    Feed feed;
    try {
        feed = parse_feed(fetch_url(skill->endpoint_url));
    } catch (const Error& e) {
        response.status = BriefingResponse::Status::skill_unavailable;
        response.message = "skill \"" + skill->invocation_name + "\" unavailable: " + e.what();
        return response;
    }

    Briefing briefing;
    briefing.source_endpoint = skill->endpoint_url;
    briefing.timestamp = iso_timestamp_now();
    for (const FeedItem& item : feed.items) {
        if (briefing.item_titles.size() >= config_.briefing_items) break;
        briefing.item_titles.push_back(item.title);
    }
    briefing.spoken_text = compose_briefing_text(skill->title_phrase, briefing.item_titles);

    response.briefing = std::move(briefing);
    return response;
}

}  // namespace mim
