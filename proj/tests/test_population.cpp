#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN

#include <map>
#include <set>

#include <doctest.h>

#include "syrup/error.hpp"
#include "syrup/population.hpp"

using namespace syrup;

namespace {

Question forecast_question(const std::string& id, const std::string& truth) {
    Question q;
    q.id = id;
    q.task_kind = TaskKind::forecast;
    q.body = "Will the deal close?";
    q.ground_truth = truth;
    return q;
}

Question qa_question_with_choices(int n_choices) {
    Question q;
    q.id = "qa-choices";
    q.task_kind = TaskKind::qa;
    q.body = "pick one";
    std::vector<std::string> choices;
    for (int i = 0; i < n_choices; ++i) choices.push_back(std::string(1, char('A' + i)));
    q.choices = choices;
    q.ground_truth = "C";
    return q;
}

EvalRecord variant(const std::string& qid, ConfLevel level, bool correct) {
    EvalRecord r;
    r.question_id = qid;
    r.suggestion = UserSuggestion{correct ? "yes" : "no", correct,
                                  ConfidenceLevel::from_level(level)};
    r.behavior = encode_behavior(r.suggestion);
    r.derivative = -1.0;
    r.accuracy = correct ? 1 : 0;
    r.model_name = "fixture";
    return r;
}

std::vector<PairedSample> make_pairs(std::size_t n, ConfLevel level) {
    std::vector<PairedSample> pairs;
    for (std::size_t i = 0; i < n; ++i) {
        std::string qid = to_string(level) + "-q" + std::to_string(i);
        pairs.push_back({qid, variant(qid, level, true), variant(qid, level, false)});
    }
    return pairs;
}

double correct_fraction(const std::vector<EvalRecord>& records) {
    std::size_t correct = 0;
    for (const auto& r : records)
        if (r.suggestion->is_correct) ++correct;
    return static_cast<double>(correct) / static_cast<double>(records.size());
}

}  // namespace

TEST_CASE("incorrect suggestions complement forecasts and draw uniformly for qa") {
    Rng rng(2024);
    CHECK(draw_incorrect_suggestion(forecast_question("f1", "yes"), rng) == "no");
    CHECK(draw_incorrect_suggestion(forecast_question("f2", "no"), rng) == "yes");

    SUBCASE("uniform over the nine wrong choices") {
        auto q = qa_question_with_choices(10);
        std::map<std::string, int> counts;
        const int n = 10000;
        for (int i = 0; i < n; ++i) ++counts[draw_incorrect_suggestion(q, rng)];
        CHECK(counts.size() == 9);
        CHECK(counts.count("C") == 0);
        double expected = n / 9.0;
        double chi2 = 0.0;
        for (const auto& [answer, count] : counts) {
            double d = count - expected;
            chi2 += d * d / expected;
        }
        CHECK(chi2 < 26.12);  // chi-square df=8 at the 0.999 quantile
    }
    SUBCASE("single choice leaves no alternative") {
        auto q = qa_question_with_choices(1);
        q.ground_truth = "A";
        CHECK_THROWS_AS(draw_incorrect_suggestion(q, rng), NoAlternative);
    }
}

TEST_CASE("downsampling hits the worked example exactly") {
    Rng rng(7);
    auto pairs = make_pairs(100, ConfLevel::null_conf);

    auto kept = downsample_correctness(pairs, 100.0 * 2 / 3, rng);
    std::size_t n_correct = 0, n_incorrect = 0;
    for (const auto& r : kept) (r.suggestion->is_correct ? n_correct : n_incorrect)++;
    CHECK(n_correct == 100);
    CHECK(n_incorrect == 50);

    SUBCASE("balanced target keeps everything") {
        CHECK(downsample_correctness(pairs, 50.0, rng).size() == 200);
    }
    SUBCASE("boundary targets keep one side") {
        auto zero = downsample_correctness(pairs, 0.0, rng);
        CHECK(zero.size() == 100);
        CHECK(correct_fraction(zero) == 0.0);
        auto full = downsample_correctness(pairs, 100.0, rng);
        CHECK(full.size() == 100);
        CHECK(correct_fraction(full) == 1.0);
        std::set<std::string> ids;
        for (const auto& r : full) CHECK(ids.insert(r.question_id).second);
    }
    SUBCASE("achieved correctness is within one record of the target across a sweep") {
        for (double target : {5.0, 25.0, 40.0, 66.67, 75.0, 90.0}) {
            auto records = downsample_correctness(pairs, target, rng);
            std::size_t nc = 0, ni = 0;
            for (const auto& r : records) (r.suggestion->is_correct ? nc : ni)++;
            auto total = static_cast<double>(nc + ni);
            double achieved = static_cast<double>(nc) / total;
            // moving one record in the minority side must not get closer
            double gap = std::fabs(achieved - target / 100.0);
            double up, down;
            if (nc == pairs.size()) {
                up = static_cast<double>(nc) / (total + 1);
                down = static_cast<double>(nc) / (total - 1);
            } else {
                up = static_cast<double>(nc + 1) / (total + 1);
                down = static_cast<double>(nc - 1) / (total - 1);
            }
            CHECK(gap <= std::fabs(up - target / 100.0) + 1e-12);
            CHECK(gap <= std::fabs(down - target / 100.0) + 1e-12);
        }
    }
    SUBCASE("empty input is rejected") {
        std::vector<PairedSample> empty;
        CHECK_THROWS_AS(downsample_correctness(empty, 50.0, rng), EmptyPopulation);
    }
}

TEST_CASE("calibrated population reaches the 0.16 user brier score") {
    Rng rng(99);
    std::map<ConfLevel, std::vector<PairedSample>> groups;
    groups[ConfLevel::low] = make_pairs(2000, ConfLevel::low);
    groups[ConfLevel::high] = make_pairs(2000, ConfLevel::high);

    auto population = build_calibrated_population(groups, rng);
    CHECK(user_brier_score(population) == doctest::Approx(0.16).epsilon(1e-9));

    // per-group correctness matches the stated confidence
    std::vector<EvalRecord> low, high;
    for (const auto& r : population)
        (r.suggestion->confidence.level == ConfLevel::low ? low : high).push_back(r);
    CHECK(correct_fraction(low) == doctest::Approx(0.20));
    CHECK(correct_fraction(high) == doctest::Approx(0.80));

    SUBCASE("missing group is an error") {
        groups.erase(ConfLevel::high);
        CHECK_THROWS_AS(build_calibrated_population(groups, rng), MissingConfidenceGroup);
    }
}

TEST_CASE("non-calibrated users score 0.34 per low or high group") {
    Rng rng(5);
    auto pairs = make_pairs(1000, ConfLevel::low);
    auto records = downsample_correctness(pairs, 50.0, rng);  // 50% correct, says 20%
    CHECK(user_brier_score(records) == doctest::Approx(0.34).epsilon(1e-9));
}

TEST_CASE("behavior encoding follows the category table") {
    CHECK(encode_behavior(std::nullopt).onehot == std::array<int, 4>{1, 0, 0, 0});
    auto low = UserSuggestion{"x", false, ConfidenceLevel::low()};
    CHECK(encode_behavior(low).onehot == std::array<int, 4>{0, 0, 1, 0});
    auto high = UserSuggestion{"x", false, ConfidenceLevel::high()};
    CHECK(encode_behavior(high).onehot == std::array<int, 4>{0, 0, 0, 1});
    auto null_conf = UserSuggestion{"x", false, ConfidenceLevel::null_conf()};
    CHECK(encode_behavior(null_conf).category == 1);

    // category -> onehot -> category closes
    for (int c = 0; c < 4; ++c)
        CHECK(BehaviorVector::from_category(c).category == c);
}

TEST_CASE("question-level splits stay leak-free") {
    std::vector<EvalRecord> records;
    for (int q = 0; q < 100; ++q) {
        std::string qid = "q" + std::to_string(q);
        for (int k = 0; k < 8; ++k) {
            EvalRecord r;
            r.question_id = qid;
            r.behavior = BehaviorVector::from_category(0);
            r.derivative = -1.0;
            r.accuracy = k % 2;
            r.model_name = "fixture";
            records.push_back(r);
        }
    }

    auto splits = split_by_question(records, 0.75, 20, 42);
    REQUIRE(splits.size() == 20);
    for (const auto& split : splits) {
        std::set<std::string> train_ids, test_ids;
        for (const auto& r : split.train) {
            train_ids.insert(r.question_id);
            CHECK(r.split_tag == SplitTag::train);
        }
        for (const auto& r : split.test) {
            test_ids.insert(r.question_id);
            CHECK(r.split_tag == SplitTag::test);
        }
        CHECK(train_ids.size() == 75);
        CHECK(test_ids.size() == 25);
        for (const auto& id : test_ids) CHECK(train_ids.count(id) == 0);
        CHECK(split.train.size() + split.test.size() == records.size());
        CHECK(split.train.size() == 75 * 8);  // all 8 records of a question move together
    }

    SUBCASE("same seed reproduces the partitions") {
        auto again = split_by_question(records, 0.75, 20, 42);
        for (std::size_t i = 0; i < splits.size(); ++i) {
            CHECK(splits[i].train == again[i].train);
            CHECK(splits[i].test == again[i].test);
        }
    }
    SUBCASE("too few questions") {
        std::vector<EvalRecord> few(records.begin(), records.begin() + 24);  // 3 questions
        CHECK_THROWS_AS(split_by_question(few, 0.75, 1, 0), TooFewQuestions);
    }
    SUBCASE("train_frac bounds") {
        CHECK_THROWS_AS(split_by_question(records, 0.0, 1, 0), InvariantViolation);
        CHECK_THROWS_AS(split_by_question(records, 1.0, 1, 0), InvariantViolation);
    }
}
