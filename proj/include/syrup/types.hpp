#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace syrup {

enum class TaskKind { qa, forecast };

enum class ConfLevel { none, null_conf, low, high };

enum class DerivativeKind { dnc, itp, itp_d };

enum class SplitTag { train, test };

enum class CalibratorKind { platt, syrup };

std::string to_string(TaskKind k);
std::string to_string(ConfLevel l);
std::string to_string(DerivativeKind k);
std::string to_string(SplitTag t);
std::string to_string(CalibratorKind k);

TaskKind task_kind_from_string(const std::string& s);
ConfLevel conf_level_from_string(const std::string& s);
DerivativeKind derivative_kind_from_string(const std::string& s);
SplitTag split_tag_from_string(const std::string& s);
CalibratorKind calibrator_kind_from_string(const std::string& s);

/// Canonical answer comparison: case-insensitive after trimming whitespace
/// and stripping surrounding parentheses, so "(A)" matches "A".
std::string normalize_answer(const std::string& s);
bool answers_match(const std::string& a, const std::string& b);

/// A task instance (QA or conversation forecast) with ground-truth answer.
struct Question {
    std::string id;
    TaskKind task_kind = TaskKind::qa;
    std::string domain_tag;
    std::string body;
    std::optional<std::vector<std::string>> choices;
    std::string ground_truth;

    void validate() const;
};

/// A user's stated confidence. percent is fixed by the level: 20 for low,
/// 80 for high, absent otherwise.
struct ConfidenceLevel {
    ConfLevel level = ConfLevel::none;
    std::optional<int> percent;

    static ConfidenceLevel none() { return {ConfLevel::none, std::nullopt}; }
    static ConfidenceLevel null_conf() { return {ConfLevel::null_conf, std::nullopt}; }
    static ConfidenceLevel low() { return {ConfLevel::low, 20}; }
    static ConfidenceLevel high() { return {ConfLevel::high, 80}; }
    static ConfidenceLevel from_level(ConfLevel l);

    void validate() const;
    bool operator==(const ConfidenceLevel&) const = default;
};

struct UserSuggestion {
    std::string suggested_answer;
    bool is_correct = false;
    ConfidenceLevel confidence;

    void validate() const;
    bool operator==(const UserSuggestion&) const = default;
};

/// One-hot encoding of the user behavior: 0 no suggestion, 1 null-confidence
/// suggestion, 2 low confidence, 3 high confidence.
struct BehaviorVector {
    int category = 0;
    std::array<int, 4> onehot = {1, 0, 0, 0};

    static BehaviorVector from_category(int category);
    static BehaviorVector from_confidence(const std::optional<ConfLevel>& level);

    void validate() const;
    bool operator==(const BehaviorVector&) const = default;
};

struct TokenLogprob {
    std::string token;
    double logprob = 0.0;

    bool operator==(const TokenLogprob&) const = default;
};

struct ModelAnswer {
    std::string raw_text;
    std::string parsed_answer;
    std::optional<int> dnc;
    std::optional<std::vector<TokenLogprob>> token_logprobs;
    int accuracy = 0;

    void validate() const;
};

/// The atom of all metrics: one (question, behavior, answer, derivative,
/// accuracy) tuple. derivative is already log-transformed.
struct EvalRecord {
    std::string question_id;
    BehaviorVector behavior;
    std::optional<UserSuggestion> suggestion;
    DerivativeKind derivative_kind = DerivativeKind::itp;
    double derivative = 0.0;
    int accuracy = 0;
    std::string model_name;
    std::optional<SplitTag> split_tag;

    void validate() const;
    bool operator==(const EvalRecord&) const = default;
};

/// Fitted calibrator coefficients. gamma vectors use reference-cell coding:
/// entry 0 (no suggestion) is pinned to zero, and for kind platt the whole
/// vectors are zero.
struct CalibratorParams {
    CalibratorKind kind = CalibratorKind::platt;
    double alpha = 0.0;
    double beta = 0.0;
    std::array<double, 4> gamma1 = {0, 0, 0, 0};
    std::array<double, 4> gamma2 = {0, 0, 0, 0};
    double ridge_lambda = 0.0;

    void validate() const;
    bool operator==(const CalibratorParams&) const = default;
};

struct CalibratedEstimate {
    double p_hat = 0.5;

    void validate() const;
};

/// Checks every core invariant of a record against its question; returns the
/// record unchanged or throws InvariantViolation naming the failed field.
EvalRecord validate_record(const EvalRecord& record, const Question& question);

}  // namespace syrup
