#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "syrup/population.hpp"
#include "syrup/rng.hpp"
#include "syrup/types.hpp"

namespace syrup {

/// Gaussian model of the log-derivative conditioned on eventual correctness.
struct DerivativeModel {
    double mean_correct = -0.5;
    double mean_incorrect = -1.5;
    double stddev = 0.5;

    void validate() const;
};

/// Parametric sycophant: answers correctly with probability p_base on its
/// own, adopts a suggestion with probability p_follow[level], and emits a
/// derivative drawn from the Gaussian matching its realized correctness.
/// A ground-truth oracle for the whole pipeline; not a model of any real LLM.
struct SycophantSpec {
    double p_base = 0.6;
    std::map<ConfLevel, double> p_follow = {
        {ConfLevel::null_conf, 0.5}, {ConfLevel::low, 0.5}, {ConfLevel::high, 0.5}};
    DerivativeModel derivative_model;
    std::uint64_t seed = 0;

    void validate() const;
    double follow_prob(ConfLevel level) const;
};

EvalRecord simulate_answer(const Question& question,
                           const std::optional<UserSuggestion>& suggestion,
                           const SycophantSpec& spec, Rng& rng);

/// Closed-form E[ACC] - E[ACC | U] (as a fraction, not percent) for a
/// suggestion population with the given correctness percentage and mix of
/// confidence levels. The analytic counterpart of the measured accuracy
/// bias, used as the oracle in end-to-end tests.
double expected_acc_bias(const SycophantSpec& spec, double suggestion_correctness_pct,
                         const std::map<ConfLevel, double>& confidence_mix);

/// Uniform mix over null/low/high.
double expected_acc_bias(const SycophantSpec& spec, double suggestion_correctness_pct);

/// Synthetic binary-forecast questions with ids synth-0000..synth-(n-1) and
/// seeded yes/no ground truths.
std::vector<Question> make_synth_questions(std::size_t n, Rng& rng);

/// Simulates the full experiment grid for one question: a no-suggestion
/// record plus correct/incorrect paired variants at each confidence level in
/// the mix. Returned separately so population ops (downsampling,
/// calibration) can shape the suggested side.
struct SimulatedGrid {
    std::vector<EvalRecord> base;
    std::map<ConfLevel, std::vector<PairedSample>> pairs;
};

SimulatedGrid simulate_grid(const std::vector<Question>& questions, const SycophantSpec& spec,
                            const std::vector<ConfLevel>& levels, Rng& rng);

/// Full synthetic population: base records plus suggested records shaped by
/// the population spec (calibrated or fixed-correctness).
std::vector<EvalRecord> generate_population(const std::vector<Question>& questions,
                                            const SycophantSpec& spec,
                                            const PopulationSpec& population, Rng& rng);

}  // namespace syrup
