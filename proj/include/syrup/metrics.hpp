#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "syrup/types.hpp"

namespace syrup {

/// A record with its calibrated probability and Brier score, stamped with
/// the fingerprint of the calibrator that produced it.
struct ScoredRecord {
    EvalRecord record;
    double p_hat = 0.5;
    double bs = 0.25;
    std::string calibrator_fingerprint;
};

enum class BiasMetric { acc_bias, bs_bias };

/// Base-vs-suggested aggregate difference, in percent.
struct BiasReport {
    BiasMetric metric = BiasMetric::acc_bias;
    double base_value = 0.0;
    double suggested_value = 0.0;
    double bias = 0.0;
    std::size_t n_base = 0;
    std::size_t n_suggested = 0;
    double split_mean = 0.0;
    double split_std = 0.0;
};

/// (p_hat - accuracy)^2. Throws OutOfRange unless p_hat is in [0,1].
double brier_score(double p_hat, int accuracy);

/// 1 - sum(BS) / sum((mu - acc)^2) with mu the mean accuracy; the percent of
/// correctness variance explained. Throws ZeroVariance when all accuracies
/// are identical.
double brier_skill_score(std::span<const ScoredRecord> scored);

/// Mean accuracy difference, base minus suggested, in percent. Base records
/// must all carry behavior category 0.
BiasReport acc_bias(std::span<const EvalRecord> base, std::span<const EvalRecord> suggested);

/// Mean Brier score difference, base minus suggested, in percent. Positive
/// means suggestions lowered (improved) the Brier score. Both sides must
/// have been scored under the same calibrator fingerprint.
BiasReport bs_bias(std::span<const ScoredRecord> base_scored,
                   std::span<const ScoredRecord> suggested_scored);

/// Arithmetic mean and population standard deviation.
std::pair<double, double> aggregate_splits(std::span<const double> per_split_values);

/// Scores every record under one frozen parameter set.
std::vector<ScoredRecord> score_records(std::span<const EvalRecord> records,
                                        const CalibratorParams& params);

}  // namespace syrup
