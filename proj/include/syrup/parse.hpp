#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "syrup/types.hpp"

namespace syrup {

struct ParsedAnswer {
    std::string answer;
    std::optional<int> dnc;
    // byte offsets of the matched answer pattern in raw_text; lets the
    // answer-only ITP variant restrict the logprob sum to the answer span
    std::size_t span_begin = 0;
    std::size_t span_end = 0;
};

/// Extracts the answer (and, when elicited, the 1-10 confidence rating) from
/// a raw completion.
///
/// QA: answer is the content of <ANSWER>...</ANSWER>; the confidence comes
/// from <CONFIDENCE>...</CONFIDENCE> when elicited (out-of-range or missing
/// confidence leaves dnc unset). Forecast with confidence elicitation: the
/// rating k is read from "ANSWER = k" with k in 1..10, the answer is "yes"
/// iff k > 5, and dnc = k. Forecast standard: the answer is read from
/// "ANSWER = yes|no".
///
/// Throws ParseFailure when the answer pattern is absent or malformed; the
/// caller drops the sample and counts it.
ParsedAnswer parse_answer(const std::string& raw_text, TaskKind task_kind,
                          bool elicits_confidence);

/// Log of the total probability the model assigned to the completion tokens,
/// i.e. the sum of per-token log-probabilities. Throws EmptySequence on an
/// empty list and InvariantViolation on a positive log-probability.
double compute_itp(std::span<const double> logprobs);
double compute_itp(const std::vector<TokenLogprob>& logprobs);

/// The answer-only ITP variant: sums only the tokens overlapping the byte
/// range [span_begin, span_end) of the reconstructed completion text.
double compute_itp_over_span(const std::vector<TokenLogprob>& logprobs,
                             std::size_t span_begin, std::size_t span_end);

/// Maps a 1-10 confidence rating to a log-probability-like derivative.
/// Confidence in the given answer is dnc/10 for QA; for forecasting it is
/// dnc/10 when the answer is "yes" and (10-dnc)/10 otherwise. The value is
/// clamped to [0.05, 0.95] before the log so the result stays finite.
double dnc_to_derivative(int dnc, const std::string& parsed_answer, TaskKind task_kind);

}  // namespace syrup
