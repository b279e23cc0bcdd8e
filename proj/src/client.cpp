#include "syrup/client.hpp"

#include <chrono>
#include <fstream>
#include <thread>

#include <httplib.h>

#include "syrup/error.hpp"
#include "syrup/sha256.hpp"

namespace syrup {

using nlohmann::json;

void InferenceRequest::validate() const {
    if (model_name.empty()) throw InvariantViolation("model_name", "must be non-empty");
    if (temperature < 0.0) throw InvariantViolation("temperature", "must be >= 0");
    if (max_tokens <= 0) throw InvariantViolation("max_tokens", "must be > 0");
}

std::string InferenceRequest::cache_key() const {
    json j{{"model_name", model_name},
           {"system_text", system_text},
           {"user_text", user_text},
           {"temperature", temperature},
           {"top_p", top_p},
           {"max_tokens", max_tokens},
           {"want_logprobs", want_logprobs}};
    return sha256_hex(j.dump());
}

void to_json(json& j, const InferenceRequest& r) {
    j = json{{"model_name", r.model_name},
             {"system_text", r.system_text},
             {"user_text", r.user_text},
             {"temperature", r.temperature},
             {"top_p", r.top_p},
             {"max_tokens", r.max_tokens},
             {"want_logprobs", r.want_logprobs},
             {"cache_key", r.cache_key()}};
}

void from_json(const json& j, InferenceRequest& r) {
    r.model_name = j.at("model_name").get<std::string>();
    r.system_text = j.at("system_text").get<std::string>();
    r.user_text = j.at("user_text").get<std::string>();
    r.temperature = j.at("temperature").get<double>();
    r.top_p = j.at("top_p").get<double>();
    r.max_tokens = j.at("max_tokens").get<int>();
    r.want_logprobs = j.at("want_logprobs").get<bool>();
}

ResponseCache::ResponseCache(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::filesystem::create_directories(dir_);
}

std::optional<json> ResponseCache::get(const std::string& key) const {
    std::filesystem::path path = dir_ / (key + ".json");
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    try {
        return json::parse(in);
    } catch (const json::parse_error&) {
        return std::nullopt;  // corrupt entry behaves like a miss
    }
}

void ResponseCache::put(const std::string& key, const json& entry) {
    std::lock_guard lock(write_mutex_);
    std::filesystem::path path = dir_ / (key + ".json");
    std::filesystem::path tmp = dir_ / (key + ".json.tmp");
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ConfigError("cannot write cache entry " + tmp.string());
        out << entry.dump(2) << '\n';
    }
    std::filesystem::rename(tmp, path);
}

namespace {

// "http://host:port/v1" -> origin "http://host:port", prefix "/v1"
std::pair<std::string, std::string> split_base_url(const std::string& base_url) {
    auto scheme_end = base_url.find("://");
    if (scheme_end == std::string::npos)
        throw ConfigError("base_url must include a scheme: " + base_url);
    auto path_start = base_url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) return {base_url, ""};
    std::string prefix = base_url.substr(path_start);
    while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
    return {base_url.substr(0, path_start), prefix};
}

bool retryable_status(int status) {
    return status == 429 || status == 408 || status >= 500;
}

}  // namespace

CompletionClient::CompletionClient(std::string base_url, std::string api_key,
                                   std::filesystem::path cache_dir, GatewayMode mode,
                                   RetryPolicy retry, int max_in_flight)
    : api_key_(std::move(api_key)),
      cache_(std::move(cache_dir)),
      mode_(mode),
      retry_(retry),
      in_flight_(std::max(1, max_in_flight)),
      jitter_rng_(0x5eed5eedULL) {
    // replay and fully-cached runs need no endpoint
    if (!base_url.empty()) {
        auto [origin, prefix] = split_base_url(base_url);
        base_origin_ = origin;
        path_prefix_ = prefix;
    }
}

json CompletionClient::post_with_retries(const InferenceRequest& request) {
    if (api_key_.empty())
        throw AuthError("no API credential; set SYRUP_API_KEY or use replay mode");
    if (base_origin_.empty()) throw ConfigError("base_url not configured");
    json body{{"model", request.model_name},
              {"messages",
               json::array({json{{"role", "system"}, {"content", request.system_text}},
                            json{{"role", "user"}, {"content", request.user_text}}})},
              {"temperature", request.temperature},
              {"top_p", request.top_p},
              {"max_tokens", request.max_tokens}};
    if (request.want_logprobs) body["logprobs"] = true;

    std::string payload = body.dump();
    std::string last_error;
    for (int attempt = 1; attempt <= retry_.max_attempts; ++attempt) {
        if (attempt > 1) {
            double jitter;
            {
                std::lock_guard lock(rng_mutex_);
                jitter = 0.5 + jitter_rng_.uniform();
            }
            auto delay = static_cast<std::int64_t>(
                static_cast<double>(retry_.base_delay_ms) * std::ldexp(1.0, attempt - 2) *
                jitter);
            std::this_thread::sleep_for(std::chrono::milliseconds(delay));
        }
        httplib::Client cli(base_origin_);
        cli.set_read_timeout(120, 0);
        httplib::Headers headers;
        if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);
        auto res = cli.Post(path_prefix_ + "/chat/completions", headers, payload,
                            "application/json");
        if (!res) {
            last_error = "transport error: " + httplib::to_string(res.error());
            continue;
        }
        if (res->status == 200) {
            try {
                return json::parse(res->body);
            } catch (const json::parse_error& e) {
                throw ProviderError(std::string("unparseable provider response: ") + e.what());
            }
        }
        if (res->status == 401 || res->status == 403)
            throw AuthError("provider rejected credentials (HTTP " +
                            std::to_string(res->status) + ")");
        if (!retryable_status(res->status))
            throw ProviderError("provider returned HTTP " + std::to_string(res->status),
                                res->status);
        last_error = "HTTP " + std::to_string(res->status);
    }
    throw ProviderError("gave up after " + std::to_string(retry_.max_attempts) +
                        " attempts; last: " + last_error);
}

InferenceResponse CompletionClient::complete(const InferenceRequest& request) {
    request.validate();
    std::string key = request.cache_key();

    if (mode_ != GatewayMode::live) {
        if (auto entry = cache_.get(key)) {
            auto response =
                parse_provider_response(entry->at("response"), request.want_logprobs);
            response.from_cache = true;
            return response;
        }
        if (mode_ == GatewayMode::replay_only)
            throw CacheMiss("no cache entry for " + key);
    }

    in_flight_.acquire();
    json provider_body;
    try {
        provider_body = post_with_retries(request);
    } catch (...) {
        in_flight_.release();
        throw;
    }
    in_flight_.release();

    cache_.put(key, json{{"request", request}, {"response", provider_body}});
    return parse_provider_response(provider_body, request.want_logprobs);
}

InferenceResponse parse_provider_response(const json& body, bool want_logprobs) {
    InferenceResponse out;
    out.provider_metadata = body;
    const json* choice = nullptr;
    if (body.contains("choices") && body.at("choices").is_array() &&
        !body.at("choices").empty())
        choice = &body.at("choices").at(0);
    if (!choice || !choice->contains("message"))
        throw ProviderError("response has no choices[0].message");
    out.raw_text = choice->at("message").value("content", std::string{});

    if (want_logprobs && choice->contains("logprobs") && !choice->at("logprobs").is_null()) {
        const auto& lp = choice->at("logprobs");
        if (lp.contains("content") && lp.at("content").is_array()) {
            std::vector<TokenLogprob> tokens;
            for (const auto& item : lp.at("content")) {
                tokens.push_back(TokenLogprob{item.value("token", std::string{}),
                                              item.at("logprob").get<double>()});
            }
            out.token_logprobs = std::move(tokens);
        }
    }
    return out;
}

}  // namespace syrup
