#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "mim/rss.hpp"

namespace mim {

// "Alexa, tell me the news today" -> wake word "Alexa", trigger phrase
// "tell me", invocation name "news".
struct UtteranceParse {
    std::string wake_word;
    std::string trigger_phrase;
    std::string invocation_name;  // lowercase
};

struct SkillRegistration {
    std::string invocation_name;  // lowercase, unique per registry
    std::string endpoint_url;
    std::string title_phrase;  // e.g. "In OSHA news"
};

struct Briefing {
    std::string spoken_text;
    std::vector<std::string> item_titles;
    std::string source_endpoint;
    std::string timestamp;
};

struct BriefingResponse {
    enum class Status { ok, not_addressed, skill_not_found, skill_unavailable };
    Status status = Status::ok;
    std::optional<Briefing> briefing;
    std::string message;  // what the assistant says when there is no briefing
};

struct AssistantConfig {
    std::vector<std::string> wake_words{"alexa"};
    std::vector<std::string> triggers{"tell me", "ask", "open", "play"};
    std::vector<std::string> fillers{"the", "a", "an", "today", "now", "please"};
    std::size_t briefing_items = 3;  // headlines per briefing, as in the study script
};

// Grammar: wake word (first token, case-insensitive, optional comma after),
// then the longest matching trigger phrase, then the first non-filler token
// as the invocation name. Returns nullopt when the text does not address
// the assistant at all; throws ValidationError for an addressed utterance
// with no recognizable trigger or invocation.
std::optional<UtteranceParse> parse_utterance(std::string_view text,
                                              const AssistantConfig& config = {});

// spoken_text = title_phrase + ", " + titles joined by ". " + "."
std::string compose_briefing_text(const std::string& title_phrase,
                                  const std::vector<std::string>& titles);

class SkillRegistry {
public:
    void register_skill(SkillRegistration reg);  // duplicate name -> ValidationError
    const SkillRegistration* find(const std::string& invocation_name) const;
    std::size_t size() const { return skills_.size(); }

    static SkillRegistry load(const std::filesystem::path& path);
    static SkillRegistry from_json(const nlohmann::json& j);

private:
    std::vector<SkillRegistration> skills_;
};

// The simulated ecosystem: route an utterance to a registered skill
// endpoint, read its feed, and compose the spoken briefing.
class Assistant {
public:
    explicit Assistant(SkillRegistry registry, AssistantConfig config = {})
        : registry_(std::move(registry)), config_(std::move(config)) {}

    BriefingResponse run_briefing(std::string_view utterance) const;

    const AssistantConfig& config() const { return config_; }

private:
    SkillRegistry registry_;
    AssistantConfig config_;
};

}  // namespace mim
