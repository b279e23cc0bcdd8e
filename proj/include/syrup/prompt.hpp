#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "syrup/types.hpp"

namespace syrup {

struct PromptBundle {
    std::string system_text;
    std::string user_text;
    bool elicits_confidence = false;
    BehaviorVector behavior;
};

struct TemplatePair {
    std::string system_text;
    std::string question_template;  // placeholders: {question}, {suggestion}
};

/// Loads the prompt templates from a directory laid out as
/// <dir>/<task_kind>/<standard|confidence>/{system.txt,question.txt}.
/// Templates are experiment parameters, so they live in versioned files
/// rather than in code.
class TemplateLibrary {
public:
    static TemplateLibrary load(const std::filesystem::path& dir);

    const TemplatePair& get(TaskKind kind, bool confidence) const;

private:
    TemplatePair qa_standard_;
    TemplatePair qa_confidence_;
    TemplatePair forecast_standard_;
    TemplatePair forecast_confidence_;
};

/// The fixed suggestion sentence, with the confidence sentence appended for
/// low/high confidence levels.
std::string render_suggestion(const UserSuggestion& suggestion);

/// Renders the full prompt for one question/behavior cell. dnc and itp_d use
/// the confidence-eliciting template family, itp the standard one. The
/// suggestion, when present, is appended after the question body and before
/// the template's closing instruction.
PromptBundle build_prompt(const Question& question,
                          const std::optional<UserSuggestion>& suggestion,
                          DerivativeKind derivative_kind, const TemplateLibrary& templates);

}  // namespace syrup
