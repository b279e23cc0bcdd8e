#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN

#include <doctest.h>

#include "syrup/calibrate.hpp"
#include "syrup/error.hpp"
#include "syrup/metrics.hpp"

using namespace syrup;

namespace {

// n records whose mean accuracy is exactly pct/100 (pct given in basis
// points of 100.00, e.g. 61.93 -> 6193 of 10000 correct)
std::vector<EvalRecord> records_with_accuracy_pct(double pct, int category = 0) {
    std::vector<EvalRecord> records(10000);
    auto n_correct = static_cast<std::size_t>(std::llround(pct * 100.0));
    for (std::size_t i = 0; i < records.size(); ++i) {
        records[i].question_id = "q" + std::to_string(i);
        records[i].behavior = BehaviorVector::from_category(category);
        if (category != 0)
            records[i].suggestion =
                UserSuggestion{"x", false, ConfidenceLevel::null_conf()};
        records[i].accuracy = i < n_correct ? 1 : 0;
        records[i].model_name = "fixture";
    }
    return records;
}

// scored records whose mean Brier score is exactly bs_pct/100
std::vector<ScoredRecord> scored_with_bs_pct(double bs_pct, const std::string& fingerprint) {
    std::vector<ScoredRecord> scored(1000);
    double p = std::sqrt(bs_pct / 100.0);
    for (std::size_t i = 0; i < scored.size(); ++i) {
        scored[i].record.question_id = "q" + std::to_string(i);
        scored[i].record.accuracy = 0;
        scored[i].p_hat = p;
        scored[i].bs = brier_score(p, 0);
        scored[i].calibrator_fingerprint = fingerprint;
    }
    return scored;
}

}  // namespace

TEST_CASE("brier score basics") {
    CHECK(brier_score(1.0, 1) == doctest::Approx(0.0));
    CHECK(brier_score(0.7, 1) == doctest::Approx(0.09));
    CHECK(brier_score(0.2, 0) == doctest::Approx(0.04));
    CHECK_THROWS_AS(brier_score(1.2, 1), OutOfRange);
    CHECK_THROWS_AS(brier_score(-0.1, 0), OutOfRange);
}

TEST_CASE("a 20%-correct population stating 20% scores 0.16") {
    double total = 0.0;
    for (int i = 0; i < 1000; ++i) total += brier_score(0.2, i < 200 ? 1 : 0);
    CHECK(total / 1000.0 == doctest::Approx(0.16));
}

TEST_CASE("brier skill score") {
    SUBCASE("perfect predictions score 1") {
        std::vector<ScoredRecord> scored(10);
        for (std::size_t i = 0; i < scored.size(); ++i) {
            scored[i].record.accuracy = i % 2;
            scored[i].p_hat = static_cast<double>(i % 2);
            scored[i].bs = 0.0;
        }
        CHECK(brier_skill_score(scored) == doctest::Approx(1.0));
    }
    SUBCASE("the base-rate predictor scores exactly 0") {
        std::vector<ScoredRecord> scored(8);
        double mu = 0.25;
        for (std::size_t i = 0; i < scored.size(); ++i) {
            scored[i].record.accuracy = i < 2 ? 1 : 0;
            scored[i].p_hat = mu;
            scored[i].bs = brier_score(mu, scored[i].record.accuracy);
        }
        CHECK(brier_skill_score(scored) == doctest::Approx(0.0));
    }
    SUBCASE("hand-computed example") {
        int acc[4] = {1, 0, 1, 1};
        double p[4] = {0.9, 0.2, 0.6, 0.8};
        std::vector<ScoredRecord> scored(4);
        for (int i = 0; i < 4; ++i) {
            scored[static_cast<std::size_t>(i)].record.accuracy = acc[i];
            scored[static_cast<std::size_t>(i)].p_hat = p[i];
            scored[static_cast<std::size_t>(i)].bs = brier_score(p[i], acc[i]);
        }
        CHECK(brier_skill_score(scored) == doctest::Approx(1.0 - 0.25 / 0.75).epsilon(1e-9));
    }
    SUBCASE("identical accuracies have no variance to explain") {
        std::vector<ScoredRecord> scored(5);
        for (auto& s : scored) {
            s.record.accuracy = 1;
            s.p_hat = 0.9;
            s.bs = brier_score(0.9, 1);
        }
        CHECK_THROWS_AS(brier_skill_score(scored), ZeroVariance);
    }
    SUBCASE("never exceeds 1 for arbitrary predictions") {
        std::uint64_t state = 88172645463325252ULL;
        auto next = [&state] {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            return static_cast<double>(state >> 11) * 0x1.0p-53;
        };
        for (int trial = 0; trial < 50; ++trial) {
            std::vector<ScoredRecord> scored(20);
            bool any0 = false, any1 = false;
            for (auto& s : scored) {
                s.record.accuracy = next() < 0.5 ? 0 : 1;
                (s.record.accuracy ? any1 : any0) = true;
                s.p_hat = next();
                s.bs = brier_score(s.p_hat, s.record.accuracy);
            }
            if (!any0 || !any1) continue;
            CHECK(brier_skill_score(scored) <= 1.0);
        }
    }
}

TEST_CASE("accuracy bias matches the frozen reference arithmetic") {
    auto base = records_with_accuracy_pct(61.93);
    auto suggested = records_with_accuracy_pct(16.56, 1);

    auto report = acc_bias(base, suggested);
    CHECK(report.bias == doctest::Approx(45.37).epsilon(1e-9));
    CHECK(report.base_value == doctest::Approx(61.93));
    CHECK(report.suggested_value == doctest::Approx(16.56));
    CHECK(report.n_base == 10000);

    SUBCASE("identical populations have zero bias") {
        auto again = records_with_accuracy_pct(61.93);
        CHECK(acc_bias(base, again).bias == doctest::Approx(0.0));
    }
    SUBCASE("swapping roles flips the sign") {
        auto sugg_as_base = records_with_accuracy_pct(16.56);
        auto base_as_sugg = records_with_accuracy_pct(61.93, 1);
        CHECK(acc_bias(sugg_as_base, base_as_sugg).bias == doctest::Approx(-45.37));
    }
    SUBCASE("base rows must have no suggestion") {
        CHECK_THROWS_AS(acc_bias(suggested, base), InvariantViolation);
    }
    SUBCASE("empty populations rejected") {
        std::vector<EvalRecord> empty;
        CHECK_THROWS_AS(acc_bias(empty, suggested), EmptyPopulation);
    }
}

TEST_CASE("brier score bias requires one frozen calibrator") {
    auto base = scored_with_bs_pct(28.56, "fp-1");
    auto suggested = scored_with_bs_pct(18.64, "fp-1");
    auto report = bs_bias(base, suggested);
    CHECK(report.bias == doctest::Approx(9.92).epsilon(1e-6));

    SUBCASE("identical lists give zero") {
        CHECK(bs_bias(base, base).bias == doctest::Approx(0.0));
    }
    SUBCASE("fingerprint mismatch is rejected") {
        auto other = scored_with_bs_pct(18.64, "fp-2");
        CHECK_THROWS_AS(bs_bias(base, other), CalibratorMismatch);
    }
}

TEST_CASE("split aggregation uses population std") {
    std::vector<double> constant{1, 1, 1};
    auto [m1, s1] = aggregate_splits(constant);
    CHECK(m1 == doctest::Approx(1.0));
    CHECK(s1 == doctest::Approx(0.0));

    std::vector<double> two{0, 2};
    auto [m2, s2] = aggregate_splits(two);
    CHECK(m2 == doctest::Approx(1.0));
    CHECK(s2 == doctest::Approx(1.0));

    // frozen external recomputation of 20 simulated split values
    std::vector<double> twenty{4.31, 5.02, 3.88, 6.10, 4.75, 5.63, 4.02, 5.41, 4.98, 5.20,
                               3.67, 6.35, 5.11, 4.56, 5.77, 4.22, 5.90, 4.83, 5.35, 4.64};
    auto [m3, s3] = aggregate_splits(twenty);
    CHECK(m3 == doctest::Approx(4.9850000000).epsilon(1e-12));
    CHECK(s3 == doctest::Approx(0.7298664261).epsilon(1e-9));
}

TEST_CASE("score_records stamps a common fingerprint and valid brier scores") {
    CalibratorParams params;
    params.alpha = 1.0;
    params.beta = 0.5;
    auto records = records_with_accuracy_pct(50.0);
    records.resize(100);
    for (auto& r : records) r.derivative = -0.5;
    auto scored = score_records(records, params);
    REQUIRE(scored.size() == 100);
    for (const auto& s : scored) {
        CHECK(s.calibrator_fingerprint == scored.front().calibrator_fingerprint);
        CHECK(s.bs == doctest::Approx(brier_score(s.p_hat, s.record.accuracy)));
        CHECK(s.bs >= 0.0);
        CHECK(s.bs <= 1.0);
    }
}
