#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "syrup/rng.hpp"
#include "syrup/types.hpp"

namespace syrup {

/// The two suggestion variants of one question at one confidence level.
struct PairedSample {
    std::string question_id;
    EvalRecord correct_variant;
    EvalRecord incorrect_variant;

    void validate() const;
};

struct PopulationSpec {
    double correctness_pct = 50.0;
    bool calibrated = false;
    std::map<ConfLevel, double> confidence_mix = {
        {ConfLevel::null_conf, 1.0 / 3}, {ConfLevel::low, 1.0 / 3}, {ConfLevel::high, 1.0 / 3}};
    std::uint64_t seed = 0;

    void validate() const;
};

/// Uniformly random wrong answer: the opposite label for forecasts, a
/// uniform draw over the non-truth choices for QA. Throws NoAlternative when
/// no wrong answer exists.
std::string draw_incorrect_suggestion(const Question& question, Rng& rng);

/// Downsamples paired records so the kept fraction of correct-suggestion
/// variants is as close as possible to target_pct, keeping as many records
/// as possible: the majority side is kept whole and the minority side is
/// drawn uniformly without replacement, with the count rounded half toward
/// keeping more data.
std::vector<EvalRecord> downsample_correctness(std::span<const PairedSample> pairs,
                                               double target_pct, Rng& rng);

/// Builds a calibrated-user population: the low-confidence group is
/// downsampled to 20% correct suggestions and the high group to 80%, so the
/// users' stated confidence matches their empirical correctness (user Brier
/// score 0.16 up to rounding). Null-confidence pairs, when present, are kept
/// whole (50% correct). Throws MissingConfidenceGroup unless both low and
/// high groups are present.
std::vector<EvalRecord> build_calibrated_population(
    const std::map<ConfLevel, std::vector<PairedSample>>& groups, Rng& rng);

/// Behavior one-hot from an optional suggestion: absent -> category 0,
/// null confidence -> 1, low -> 2, high -> 3.
BehaviorVector encode_behavior(const std::optional<UserSuggestion>& suggestion);

struct SplitPartition {
    std::vector<EvalRecord> train;
    std::vector<EvalRecord> test;
};

/// Seeded train/test partitions of the question-id set (not of records): all
/// records of a question land on the same side. Records in the output carry
/// their split_tag. Throws TooFewQuestions below 4 distinct ids.
std::vector<SplitPartition> split_by_question(std::span<const EvalRecord> records,
                                              double train_frac, int n_splits,
                                              std::uint64_t seed);

/// Mean squared gap between stated confidence (percent/100) and suggestion
/// correctness, over the records whose suggestion states a percentage.
/// Reported, never targeted, for non-calibrated populations.
double user_brier_score(std::span<const EvalRecord> records);

}  // namespace syrup
