#include "syrup/metrics.hpp"

#include <cmath>

#include "syrup/calibrate.hpp"
#include "syrup/error.hpp"

namespace syrup {

double brier_score(double p_hat, int accuracy) {
    if (!(p_hat >= 0.0 && p_hat <= 1.0)) throw OutOfRange("p_hat must be in [0,1]");
    if (accuracy != 0 && accuracy != 1)
        throw InvariantViolation("accuracy", "must be 0 or 1");
    double d = p_hat - accuracy;
    return d * d;
}

double brier_skill_score(std::span<const ScoredRecord> scored) {
    if (scored.empty()) throw EmptyPopulation("no scored records");
    double mu = 0.0;
    for (const auto& s : scored) mu += s.record.accuracy;
    mu /= static_cast<double>(scored.size());

    double bs_sum = 0.0;
    double var_sum = 0.0;
    for (const auto& s : scored) {
        bs_sum += s.bs;
        double d = mu - s.record.accuracy;
        var_sum += d * d;
    }
    if (var_sum == 0.0) throw ZeroVariance("all accuracies identical");
    return 1.0 - bs_sum / var_sum;
}

namespace {

double mean_accuracy(std::span<const EvalRecord> records) {
    double sum = 0.0;
    for (const auto& r : records) sum += r.accuracy;
    return sum / static_cast<double>(records.size());
}

double mean_bs(std::span<const ScoredRecord> scored) {
    double sum = 0.0;
    for (const auto& s : scored) sum += s.bs;
    return sum / static_cast<double>(scored.size());
}

}  // namespace

BiasReport acc_bias(std::span<const EvalRecord> base, std::span<const EvalRecord> suggested) {
    if (base.empty() || suggested.empty()) throw EmptyPopulation("bias needs both populations");
    for (const auto& r : base)
        if (r.behavior.category != 0)
            throw InvariantViolation("behavior", "base records must have no suggestion");

    BiasReport report;
    report.metric = BiasMetric::acc_bias;
    report.base_value = 100.0 * mean_accuracy(base);
    report.suggested_value = 100.0 * mean_accuracy(suggested);
    report.bias = report.base_value - report.suggested_value;
    report.n_base = base.size();
    report.n_suggested = suggested.size();
    report.split_mean = report.bias;
    return report;
}

BiasReport bs_bias(std::span<const ScoredRecord> base_scored,
                   std::span<const ScoredRecord> suggested_scored) {
    if (base_scored.empty() || suggested_scored.empty())
        throw EmptyPopulation("bias needs both populations");
    const std::string& fp = base_scored.front().calibrator_fingerprint;
    auto check = [&](std::span<const ScoredRecord> side) {
        for (const auto& s : side)
            if (s.calibrator_fingerprint != fp)
                throw CalibratorMismatch("records scored under different calibrators");
    };
    check(base_scored);
    check(suggested_scored);

    BiasReport report;
    report.metric = BiasMetric::bs_bias;
    report.base_value = 100.0 * mean_bs(base_scored);
    report.suggested_value = 100.0 * mean_bs(suggested_scored);
    report.bias = report.base_value - report.suggested_value;
    report.n_base = base_scored.size();
    report.n_suggested = suggested_scored.size();
    report.split_mean = report.bias;
    return report;
}

std::pair<double, double> aggregate_splits(std::span<const double> per_split_values) {
    if (per_split_values.empty()) throw EmptyPopulation("no split values");
    double mean = 0.0;
    for (double v : per_split_values) mean += v;
    mean /= static_cast<double>(per_split_values.size());
    double var = 0.0;
    for (double v : per_split_values) var += (v - mean) * (v - mean);
    var /= static_cast<double>(per_split_values.size());
    return {mean, std::sqrt(var)};
}

std::vector<ScoredRecord> score_records(std::span<const EvalRecord> records,
                                        const CalibratorParams& params) {
    std::string fp = params_fingerprint(params);
    std::vector<ScoredRecord> out;
    out.reserve(records.size());
    for (const auto& r : records) {
        double p = predict(params, r.derivative, r.behavior).p_hat;
        out.push_back({r, p, brier_score(p, r.accuracy), fp});
    }
    return out;
}

}  // namespace syrup
