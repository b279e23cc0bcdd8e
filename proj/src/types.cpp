#include "syrup/types.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "syrup/error.hpp"

namespace syrup {

std::string to_string(TaskKind k) {
    switch (k) {
        case TaskKind::qa: return "qa";
        case TaskKind::forecast: return "forecast";
    }
    throw UnknownTaskKind("task_kind out of range");
}

std::string to_string(ConfLevel l) {
    switch (l) {
        case ConfLevel::none: return "none";
        case ConfLevel::null_conf: return "null_conf";
        case ConfLevel::low: return "low";
        case ConfLevel::high: return "high";
    }
    throw InvariantViolation("level", "out of range");
}

std::string to_string(DerivativeKind k) {
    switch (k) {
        case DerivativeKind::dnc: return "dnc";
        case DerivativeKind::itp: return "itp";
        case DerivativeKind::itp_d: return "itp_d";
    }
    throw InvariantViolation("derivative_kind", "out of range");
}

std::string to_string(SplitTag t) {
    return t == SplitTag::train ? "train" : "test";
}

std::string to_string(CalibratorKind k) {
    return k == CalibratorKind::platt ? "platt" : "syrup";
}

TaskKind task_kind_from_string(const std::string& s) {
    if (s == "qa") return TaskKind::qa;
    if (s == "forecast") return TaskKind::forecast;
    throw UnknownTaskKind("unknown task_kind: " + s);
}

ConfLevel conf_level_from_string(const std::string& s) {
    if (s == "none") return ConfLevel::none;
    if (s == "null_conf") return ConfLevel::null_conf;
    if (s == "low") return ConfLevel::low;
    if (s == "high") return ConfLevel::high;
    throw InvariantViolation("level", "unknown confidence level: " + s);
}

DerivativeKind derivative_kind_from_string(const std::string& s) {
    if (s == "dnc") return DerivativeKind::dnc;
    if (s == "itp") return DerivativeKind::itp;
    if (s == "itp_d") return DerivativeKind::itp_d;
    throw InvariantViolation("derivative_kind", "unknown derivative kind: " + s);
}

SplitTag split_tag_from_string(const std::string& s) {
    if (s == "train") return SplitTag::train;
    if (s == "test") return SplitTag::test;
    throw InvariantViolation("split_tag", "unknown split tag: " + s);
}

CalibratorKind calibrator_kind_from_string(const std::string& s) {
    if (s == "platt") return CalibratorKind::platt;
    if (s == "syrup") return CalibratorKind::syrup;
    throw InvariantViolation("kind", "unknown calibrator kind: " + s);
}

std::string normalize_answer(const std::string& s) {
    auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
    std::size_t lo = 0;
    std::size_t hi = s.size();
    for (;;) {
        while (lo < hi && is_space(static_cast<unsigned char>(s[lo]))) ++lo;
        while (hi > lo && is_space(static_cast<unsigned char>(s[hi - 1]))) --hi;
        if (hi - lo >= 2 && s[lo] == '(' && s[hi - 1] == ')') {
            ++lo;
            --hi;
            continue;
        }
        break;
    }
    std::string out = s.substr(lo, hi - lo);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

bool answers_match(const std::string& a, const std::string& b) {
    return normalize_answer(a) == normalize_answer(b);
}

void Question::validate() const {
    if (id.empty()) throw InvariantViolation("id", "must be non-empty");
    if (body.empty()) throw InvariantViolation("body", "must be non-empty");
    if (ground_truth.empty()) throw InvariantViolation("ground_truth", "must be non-empty");
    if (choices) {
        bool found = std::any_of(choices->begin(), choices->end(), [&](const std::string& c) {
            return answers_match(c, ground_truth);
        });
        if (!found)
            throw InvariantViolation("ground_truth", "not among choices for question " + id);
    }
}

ConfidenceLevel ConfidenceLevel::from_level(ConfLevel l) {
    switch (l) {
        case ConfLevel::none: return none();
        case ConfLevel::null_conf: return null_conf();
        case ConfLevel::low: return low();
        case ConfLevel::high: return high();
    }
    throw InvariantViolation("level", "out of range");
}

void ConfidenceLevel::validate() const {
    bool wants_percent = level == ConfLevel::low || level == ConfLevel::high;
    if (wants_percent != percent.has_value())
        throw InvariantViolation("percent", "present iff level is low or high");
    if (percent) {
        int expected = level == ConfLevel::low ? 20 : 80;
        if (*percent != expected)
            throw InvariantViolation("percent", "must be 20 for low and 80 for high");
    }
}

void UserSuggestion::validate() const {
    confidence.validate();
    if (confidence.level == ConfLevel::none)
        throw InvariantViolation("confidence", "a suggestion must carry a confidence level");
    if (suggested_answer.empty())
        throw InvariantViolation("suggested_answer", "must be non-empty");
}

BehaviorVector BehaviorVector::from_category(int category) {
    if (category < 0 || category > 3)
        throw InvariantViolation("category", "must be in {0,1,2,3}");
    BehaviorVector v;
    v.category = category;
    v.onehot = {0, 0, 0, 0};
    v.onehot[static_cast<std::size_t>(category)] = 1;
    return v;
}

BehaviorVector BehaviorVector::from_confidence(const std::optional<ConfLevel>& level) {
    if (!level || *level == ConfLevel::none) return from_category(0);
    switch (*level) {
        case ConfLevel::null_conf: return from_category(1);
        case ConfLevel::low: return from_category(2);
        case ConfLevel::high: return from_category(3);
        default: return from_category(0);
    }
}

void BehaviorVector::validate() const {
    if (category < 0 || category > 3)
        throw InvariantViolation("category", "must be in {0,1,2,3}");
    int ones = 0;
    for (int v : onehot) {
        if (v != 0 && v != 1) throw InvariantViolation("onehot", "entries must be 0 or 1");
        ones += v;
    }
    if (ones != 1) throw InvariantViolation("onehot", "exactly one entry must be 1");
    if (onehot[static_cast<std::size_t>(category)] != 1)
        throw InvariantViolation("onehot", "hot entry must match category");
}

void ModelAnswer::validate() const {
    if (accuracy != 0 && accuracy != 1)
        throw InvariantViolation("accuracy", "must be 0 or 1");
    if (dnc && (*dnc < 1 || *dnc > 10))
        throw InvariantViolation("dnc", "must be in [1,10]");
    if (token_logprobs) {
        for (const auto& t : *token_logprobs)
            if (t.logprob > 0.0)
                throw InvariantViolation("token_logprobs", "log-probabilities must be <= 0");
    }
}

void EvalRecord::validate() const {
    behavior.validate();
    if (question_id.empty()) throw InvariantViolation("question_id", "must be non-empty");
    if (suggestion.has_value() != (behavior.category != 0))
        throw InvariantViolation("suggestion", "present iff behavior.category != 0");
    if (suggestion) {
        suggestion->validate();
        if (behavior != BehaviorVector::from_confidence(suggestion->confidence.level))
            throw InvariantViolation("behavior", "category must encode the suggestion confidence");
    }
    if (!std::isfinite(derivative))
        throw InvariantViolation("derivative", "must be finite");
    if (accuracy != 0 && accuracy != 1)
        throw InvariantViolation("accuracy", "must be 0 or 1");
}

void CalibratorParams::validate() const {
    if (ridge_lambda < 0) throw InvariantViolation("ridge_lambda", "must be >= 0");
    if (gamma1[0] != 0.0 || gamma2[0] != 0.0)
        throw InvariantViolation("gamma1", "reference cell (category 0) must be zero");
    if (kind == CalibratorKind::platt) {
        for (double g : gamma1)
            if (g != 0.0) throw InvariantViolation("gamma1", "must be zero for platt");
        for (double g : gamma2)
            if (g != 0.0) throw InvariantViolation("gamma2", "must be zero for platt");
    }
}

void CalibratedEstimate::validate() const {
    if (!(p_hat > 0.0 && p_hat < 1.0))
        throw InvariantViolation("p_hat", "must be strictly inside (0,1)");
}

EvalRecord validate_record(const EvalRecord& record, const Question& question) {
    if (question.id != record.question_id)
        throw InvariantViolation("question_id",
                                 "record does not belong to question " + question.id);
    record.validate();
    if (record.suggestion) {
        bool matches = answers_match(record.suggestion->suggested_answer, question.ground_truth);
        if (record.suggestion->is_correct != matches)
            throw InvariantViolation("is_correct",
                                     "must equal (suggested_answer == ground_truth)");
    }
    return record;
}

}  // namespace syrup
