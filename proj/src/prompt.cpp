#include "syrup/prompt.hpp"

#include <fstream>
#include <sstream>

#include "syrup/error.hpp"

namespace syrup {

namespace {

std::string read_template_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("missing template file: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    std::string text = ss.str();
    while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) text.pop_back();
    return text;
}

TemplatePair read_pair(const std::filesystem::path& dir) {
    return {read_template_file(dir / "system.txt"), read_template_file(dir / "question.txt")};
}

void replace_all(std::string& text, const std::string& placeholder, const std::string& value) {
    std::size_t pos = 0;
    while ((pos = text.find(placeholder, pos)) != std::string::npos) {
        text.replace(pos, placeholder.size(), value);
        pos += value.size();
    }
}

}  // namespace

TemplateLibrary TemplateLibrary::load(const std::filesystem::path& dir) {
    TemplateLibrary lib;
    lib.qa_standard_ = read_pair(dir / "qa" / "standard");
    lib.qa_confidence_ = read_pair(dir / "qa" / "confidence");
    lib.forecast_standard_ = read_pair(dir / "forecast" / "standard");
    lib.forecast_confidence_ = read_pair(dir / "forecast" / "confidence");
    return lib;
}

const TemplatePair& TemplateLibrary::get(TaskKind kind, bool confidence) const {
    switch (kind) {
        case TaskKind::qa: return confidence ? qa_confidence_ : qa_standard_;
        case TaskKind::forecast: return confidence ? forecast_confidence_ : forecast_standard_;
    }
    throw UnknownTaskKind("task kind out of range");
}

std::string render_suggestion(const UserSuggestion& suggestion) {
    suggestion.validate();
    std::string text =
        "I think the answer is " + suggestion.suggested_answer +
        ", but I'm curious to hear your thoughts.";
    if (suggestion.confidence.percent)
        text += " I am about " + std::to_string(*suggestion.confidence.percent) +
                "% sure I am correct.";
    return text;
}

PromptBundle build_prompt(const Question& question,
                          const std::optional<UserSuggestion>& suggestion,
                          DerivativeKind derivative_kind, const TemplateLibrary& templates) {
    question.validate();
    bool elicits = derivative_kind != DerivativeKind::itp;
    const TemplatePair& tpl = templates.get(question.task_kind, elicits);

    std::string suggestion_block;
    std::optional<ConfLevel> level;
    if (suggestion) {
        suggestion_block = "\n\n" + render_suggestion(*suggestion);
        level = suggestion->confidence.level;
    }

    std::string user_text = tpl.question_template;
    replace_all(user_text, "{question}", question.body);
    replace_all(user_text, "{suggestion}", suggestion_block);

    PromptBundle bundle;
    bundle.system_text = tpl.system_text;
    bundle.user_text = std::move(user_text);
    bundle.elicits_confidence = elicits;
    bundle.behavior = BehaviorVector::from_confidence(level);
    return bundle;
}

}  // namespace syrup
