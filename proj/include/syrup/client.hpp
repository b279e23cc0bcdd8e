#pragma once

#include <cstdint>
#include <filesystem>
#include <mutex>
#include <optional>
#include <semaphore>
#include <string>
#include <vector>

#include <json.hpp>

#include "syrup/rng.hpp"
#include "syrup/types.hpp"

namespace syrup {

struct InferenceRequest {
    std::string model_name;
    std::string system_text;
    std::string user_text;
    double temperature = 0.7;
    double top_p = 1.0;
    int max_tokens = 512;
    bool want_logprobs = false;

    /// Content hash of all other fields; the cache filename stem.
    std::string cache_key() const;

    void validate() const;
};

void to_json(nlohmann::json& j, const InferenceRequest& r);
void from_json(const nlohmann::json& j, InferenceRequest& r);

struct InferenceResponse {
    std::string raw_text;
    std::optional<std::vector<TokenLogprob>> token_logprobs;
    nlohmann::json provider_metadata;
    bool from_cache = false;
};

/// Append-only directory of content-addressed response files
/// (<cache_dir>/<sha256>.json). One corrupt entry never affects the others.
/// Readers are lock-free; writers are serialized and write via rename.
class ResponseCache {
public:
    explicit ResponseCache(std::filesystem::path dir);

    std::optional<nlohmann::json> get(const std::string& key) const;
    void put(const std::string& key, const nlohmann::json& entry);
    const std::filesystem::path& dir() const { return dir_; }

private:
    std::filesystem::path dir_;
    std::mutex write_mutex_;
};

enum class GatewayMode { live, cache_first, replay_only };

struct RetryPolicy {
    int max_attempts = 5;
    int base_delay_ms = 1000;  // doubled per attempt, jittered by [0.5, 1.5)
};

/// Chat-completions client against an OpenAI-compatible endpoint, with the
/// response cache in front. In replay_only mode no network is touched and a
/// missing key raises CacheMiss. Bounded concurrent in-flight requests.
class CompletionClient {
public:
    CompletionClient(std::string base_url, std::string api_key, std::filesystem::path cache_dir,
                     GatewayMode mode = GatewayMode::cache_first, RetryPolicy retry = {},
                     int max_in_flight = 8);

    InferenceResponse complete(const InferenceRequest& request);

    GatewayMode mode() const { return mode_; }

private:
    nlohmann::json post_with_retries(const InferenceRequest& request);

    std::string base_origin_;
    std::string path_prefix_;
    std::string api_key_;
    ResponseCache cache_;
    GatewayMode mode_;
    RetryPolicy retry_;
    std::counting_semaphore<4096> in_flight_;
    std::mutex rng_mutex_;
    Rng jitter_rng_;
};

/// Pulls the completion text (and token logprobs, when present) out of a
/// chat-completions response body.
InferenceResponse parse_provider_response(const nlohmann::json& body, bool want_logprobs);

}  // namespace syrup
