#include "syrup/population.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "syrup/error.hpp"

namespace syrup {

void PairedSample::validate() const {
    correct_variant.validate();
    incorrect_variant.validate();
    if (correct_variant.question_id != question_id ||
        incorrect_variant.question_id != question_id)
        throw InvariantViolation("question_id", "variants must share the pair's question id");
    if (!correct_variant.suggestion || !incorrect_variant.suggestion)
        throw InvariantViolation("suggestion", "both variants must carry a suggestion");
    if (!correct_variant.suggestion->is_correct)
        throw InvariantViolation("is_correct", "correct_variant must have a correct suggestion");
    if (incorrect_variant.suggestion->is_correct)
        throw InvariantViolation("is_correct",
                                 "incorrect_variant must have an incorrect suggestion");
    if (correct_variant.suggestion->confidence.level !=
        incorrect_variant.suggestion->confidence.level)
        throw InvariantViolation("confidence", "variants must share the confidence level");
}

void PopulationSpec::validate() const {
    if (correctness_pct < 0.0 || correctness_pct > 100.0)
        throw InvariantViolation("correctness_pct", "must be in [0,100]");
    double total = 0.0;
    for (const auto& [level, w] : confidence_mix) {
        if (level == ConfLevel::none)
            throw InvariantViolation("confidence_mix", "suggestions cannot have level none");
        if (w < 0.0) throw InvariantViolation("confidence_mix", "weights must be >= 0");
        total += w;
    }
    if (std::fabs(total - 1.0) > 1e-9)
        throw InvariantViolation("confidence_mix", "must sum to 1");
}

std::string draw_incorrect_suggestion(const Question& question, Rng& rng) {
    question.validate();
    if (question.task_kind == TaskKind::forecast) {
        // binary outcome: the only wrong answer is the complement
        return answers_match(question.ground_truth, "yes") ? "no" : "yes";
    }
    if (!question.choices) throw NoAlternative("question has no choice list");
    std::vector<std::string> wrong;
    for (const auto& c : *question.choices)
        if (!answers_match(c, question.ground_truth)) wrong.push_back(c);
    if (wrong.empty()) throw NoAlternative("no incorrect choice for question " + question.id);
    return wrong[static_cast<std::size_t>(rng.uniform_below(wrong.size()))];
}

namespace {

// round to nearest, ties toward keeping more data
std::size_t round_half_up(double x) {
    return static_cast<std::size_t>(std::floor(x + 0.5));
}

std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k, Rng& rng) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    rng.shuffle(idx);
    idx.resize(k);
    std::sort(idx.begin(), idx.end());
    return idx;
}

}  // namespace

std::vector<EvalRecord> downsample_correctness(std::span<const PairedSample> pairs,
                                               double target_pct, Rng& rng) {
    if (pairs.empty()) throw EmptyPopulation("no pairs to downsample");
    if (target_pct < 0.0 || target_pct > 100.0)
        throw InvariantViolation("target_pct", "must be in [0,100]");
    for (const auto& p : pairs) p.validate();

    const std::size_t n = pairs.size();
    double t = target_pct / 100.0;
    std::size_t n_correct, n_incorrect;
    if (t >= 0.5) {
        n_correct = n;
        n_incorrect = t >= 1.0 ? 0 : round_half_up(static_cast<double>(n) * (1.0 - t) / t);
    } else {
        n_incorrect = n;
        n_correct = t <= 0.0 ? 0 : round_half_up(static_cast<double>(n) * t / (1.0 - t));
    }

    std::vector<bool> keep_correct(n, n_correct == n);
    std::vector<bool> keep_incorrect(n, n_incorrect == n);
    if (n_correct < n)
        for (std::size_t i : sample_without_replacement(n, n_correct, rng)) keep_correct[i] = true;
    if (n_incorrect < n)
        for (std::size_t i : sample_without_replacement(n, n_incorrect, rng))
            keep_incorrect[i] = true;

    std::vector<EvalRecord> out;
    out.reserve(n_correct + n_incorrect);
    for (std::size_t i = 0; i < n; ++i) {
        if (keep_correct[i]) out.push_back(pairs[i].correct_variant);
        if (keep_incorrect[i]) out.push_back(pairs[i].incorrect_variant);
    }
    return out;
}

std::vector<EvalRecord> build_calibrated_population(
    const std::map<ConfLevel, std::vector<PairedSample>>& groups, Rng& rng) {
    auto low = groups.find(ConfLevel::low);
    auto high = groups.find(ConfLevel::high);
    if (low == groups.end() || low->second.empty() || high == groups.end() ||
        high->second.empty())
        throw MissingConfidenceGroup("calibrated populations need low and high groups");

    std::vector<EvalRecord> out;
    for (const auto& [level, pairs] : groups) {
        if (pairs.empty()) continue;
        double target;
        switch (level) {
            case ConfLevel::low: target = 20.0; break;
            case ConfLevel::high: target = 80.0; break;
            default: target = 50.0; break;
        }
        auto kept = downsample_correctness(pairs, target, rng);
        out.insert(out.end(), kept.begin(), kept.end());
    }
    return out;
}

BehaviorVector encode_behavior(const std::optional<UserSuggestion>& suggestion) {
    if (!suggestion) return BehaviorVector::from_category(0);
    return BehaviorVector::from_confidence(suggestion->confidence.level);
}

std::vector<SplitPartition> split_by_question(std::span<const EvalRecord> records,
                                              double train_frac, int n_splits,
                                              std::uint64_t seed) {
    if (!(train_frac > 0.0 && train_frac < 1.0))
        throw InvariantViolation("train_frac", "must be strictly between 0 and 1");
    if (n_splits < 1) throw InvariantViolation("n_splits", "must be >= 1");

    std::set<std::string> id_set;
    for (const auto& r : records) id_set.insert(r.question_id);
    if (id_set.size() < 4)
        throw TooFewQuestions("need at least 4 distinct questions, have " +
                              std::to_string(id_set.size()));

    std::vector<std::string> ids(id_set.begin(), id_set.end());
    auto n_train = static_cast<std::size_t>(
        std::llround(train_frac * static_cast<double>(ids.size())));
    n_train = std::clamp<std::size_t>(n_train, 1, ids.size() - 1);

    std::vector<SplitPartition> partitions;
    partitions.reserve(static_cast<std::size_t>(n_splits));
    for (int split = 0; split < n_splits; ++split) {
        Rng rng(derive_seed(seed, "split", static_cast<std::uint64_t>(split)));
        std::vector<std::string> shuffled = ids;
        rng.shuffle(shuffled);
        std::set<std::string> train_ids(shuffled.begin(),
                                        shuffled.begin() + static_cast<std::ptrdiff_t>(n_train));
        SplitPartition part;
        for (const auto& r : records) {
            EvalRecord tagged = r;
            if (train_ids.count(r.question_id)) {
                tagged.split_tag = SplitTag::train;
                part.train.push_back(std::move(tagged));
            } else {
                tagged.split_tag = SplitTag::test;
                part.test.push_back(std::move(tagged));
            }
        }
        partitions.push_back(std::move(part));
    }
    return partitions;
}

double user_brier_score(std::span<const EvalRecord> records) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& r : records) {
        if (!r.suggestion || !r.suggestion->confidence.percent) continue;
        double stated = *r.suggestion->confidence.percent / 100.0;
        double d = stated - (r.suggestion->is_correct ? 1.0 : 0.0);
        sum += d * d;
        ++n;
    }
    if (n == 0) throw EmptyPopulation("no records with stated confidence");
    return sum / static_cast<double>(n);
}

}  // namespace syrup
