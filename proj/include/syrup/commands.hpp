#pragma once

#include "syrup/config.hpp"

namespace syrup {

// One function per CLI subcommand. Each is deterministic given its inputs
// and config (all randomness is derived from config.seed per stage), so
// reruns rewrite byte-identical outputs. Errors are thrown; the CLI maps
// them to exit codes.

/// Renders the full dataset x behavior grid into the prompt manifest.
void run_forge(const RunConfig& config);

/// Completes every manifest entry (through the cache), parses answers and
/// derivatives, and writes the EvalRecord stream plus a drop-count manifest.
void run_infer(const RunConfig& config);

/// Shapes inferred records into a population with the configured suggestion
/// correctness / calibration, and writes it with its manifest.
void run_sample(const RunConfig& config);

/// Fits Platt and SyRoUP on the population and writes the parameter files.
void run_fit(const RunConfig& config);

/// Fits per split, scores the test sides, and writes the bias/BSS report
/// tables (CSV and Markdown) with mean/std over splits.
void run_eval(const RunConfig& config);

/// Drives the synthetic sycophant into a ready-to-eval population.
void run_synth(const RunConfig& config);

/// Re-renders the Markdown report from the CSV.
void run_report(const RunConfig& config);

/// Maps a thrown error to the documented process exit code: 1 config,
/// 2 provider, 3 auth, 4 degenerate data.
int exit_code_for_current_exception();

}  // namespace syrup
