#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

#include "syrup/client.hpp"
#include "syrup/population.hpp"
#include "syrup/synth.hpp"
#include "syrup/types.hpp"

namespace syrup {

enum class ItpSpan { full, answer_only };

/// Everything a pipeline run needs. Assembled from a flat key-value config
/// file plus flag overrides (flags win); see parse_config_file for the file
/// format and RunConfig::from_map for the key schema.
struct RunConfig {
    // inference
    std::string base_url;
    std::string model_name = "default-model";
    DerivativeKind derivative_kind = DerivativeKind::itp;
    double temperature = 0.7;
    double top_p = 1.0;
    int max_tokens = 512;
    int concurrency = 8;
    GatewayMode mode = GatewayMode::cache_first;
    ItpSpan itp_span = ItpSpan::full;
    RetryPolicy retry;

    // paths
    std::filesystem::path questions;
    std::filesystem::path templates = "templates";
    std::filesystem::path cache_dir = "cache";
    std::filesystem::path output_dir = "out";
    std::string dataset_tag = "default";

    // experiment
    std::uint64_t seed = 0;
    double train_frac = 0.75;
    int n_splits = 20;
    double ridge_lambda = 1e-4;
    PopulationSpec population;

    // synth
    std::size_t n_questions = 200;
    SycophantSpec sycophant;

    static RunConfig from_map(const std::map<std::string, std::string>& kv);
    void validate() const;

    std::filesystem::path manifests_dir() const { return output_dir / "manifests"; }
    std::filesystem::path records_dir() const { return output_dir / "records"; }
    std::filesystem::path reports_dir() const { return output_dir / "reports"; }
    std::filesystem::path prompt_manifest_path() const {
        return manifests_dir() / "prompts.jsonl";
    }
    std::filesystem::path records_path() const { return records_dir() / "records.jsonl"; }
    std::filesystem::path population_path() const {
        return records_dir() / "population.jsonl";
    }
};

/// Parses `key = value` lines. Blank lines and lines starting with '#' are
/// ignored; keys are validated downstream so typos fail loudly.
std::map<std::string, std::string> parse_config_file(const std::filesystem::path& path);

}  // namespace syrup
