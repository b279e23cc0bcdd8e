#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN

#include <atomic>
#include <filesystem>
#include <thread>

#include <doctest.h>
#include <httplib.h>
#include <json.hpp>

#include "syrup/client.hpp"
#include "syrup/error.hpp"

using namespace syrup;
using nlohmann::json;

namespace {

std::filesystem::path fresh_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("syrup-test-" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

InferenceRequest sample_request() {
    InferenceRequest req;
    req.model_name = "test-model";
    req.system_text = "You are a test.";
    req.user_text = "Say hi.";
    return req;
}

json completion_body(const std::string& text) {
    return json{{"choices",
                 json::array({json{{"message", json{{"role", "assistant"},
                                                    {"content", text}}}}})}};
}

// scripted provider: fails with 429 `failures` times, then succeeds
struct MockProvider {
    httplib::Server server;
    std::thread thread;
    int port = 0;
    std::atomic<int> hits{0};

    explicit MockProvider(int failures, const std::string& text = "ANSWER = yes") {
        server.Post("/v1/chat/completions",
                    [this, failures, text](const httplib::Request&, httplib::Response& res) {
                        int n = ++hits;
                        if (n <= failures) {
                            res.status = 429;
                            res.set_content("slow down", "text/plain");
                            return;
                        }
                        res.set_content(completion_body(text).dump(), "application/json");
                    });
        port = server.bind_to_any_port("127.0.0.1");
        thread = std::thread([this] { server.listen_after_bind(); });
        server.wait_until_ready();
    }

    ~MockProvider() {
        server.stop();
        thread.join();
    }

    std::string base_url() const {
        return "http://127.0.0.1:" + std::to_string(port) + "/v1";
    }
};

}  // namespace

TEST_CASE("cache keys are content hashes of the request") {
    auto a = sample_request();
    auto b = sample_request();
    CHECK(a.cache_key() == b.cache_key());
    CHECK(a.cache_key().size() == 64);

    b.user_text += "!";
    CHECK(a.cache_key() != b.cache_key());
    b = sample_request();
    b.temperature = 0.8;
    CHECK(a.cache_key() != b.cache_key());
    b = sample_request();
    b.want_logprobs = true;
    CHECK(a.cache_key() != b.cache_key());
}

TEST_CASE("response cache round-trips and shrugs off corruption") {
    ResponseCache cache(fresh_dir("cache"));
    CHECK_FALSE(cache.get("deadbeef").has_value());
    cache.put("deadbeef", json{{"response", completion_body("hello")}});
    auto entry = cache.get("deadbeef");
    REQUIRE(entry.has_value());
    CHECK(entry->at("response").at("choices").at(0).at("message").at("content") == "hello");

    // corrupt entry behaves like a miss and never touches its neighbors
    std::ofstream(cache.dir() / "cafe.json") << "{not json";
    CHECK_FALSE(cache.get("cafe").has_value());
    CHECK(cache.get("deadbeef").has_value());
}

TEST_CASE("cached requests are served without a network call") {
    auto dir = fresh_dir("replay");
    auto request = sample_request();
    {
        ResponseCache cache(dir);
        cache.put(request.cache_key(),
                  json{{"request", request}, {"response", completion_body("cached!")}});
    }
    CompletionClient client("", "", dir, GatewayMode::replay_only);
    auto response = client.complete(request);
    CHECK(response.from_cache);
    CHECK(response.raw_text == "cached!");
}

TEST_CASE("replay mode misses raise CacheMiss") {
    CompletionClient client("", "", fresh_dir("replay-miss"), GatewayMode::replay_only);
    CHECK_THROWS_AS(client.complete(sample_request()), CacheMiss);
}

TEST_CASE("missing credential in live mode is an auth error") {
    CompletionClient client("http://127.0.0.1:9/v1", "", fresh_dir("noauth"),
                            GatewayMode::live);
    CHECK_THROWS_AS(client.complete(sample_request()), AuthError);
}

TEST_CASE("client retries through 429s with backoff") {
    auto cache_dir = fresh_dir("retry");
    MockProvider provider(3);
    CompletionClient client(provider.base_url(), "test-key", cache_dir, GatewayMode::live,
                            RetryPolicy{5, 1});
    auto response = client.complete(sample_request());
    CHECK(response.raw_text == "ANSWER = yes");
    CHECK(provider.hits == 4);
    CHECK_FALSE(response.from_cache);

    SUBCASE("the response landed in the cache for replay") {
        CompletionClient replay("", "", cache_dir, GatewayMode::replay_only);
        auto again = replay.complete(sample_request());
        CHECK(again.from_cache);
        CHECK(again.raw_text == "ANSWER = yes");
    }
}

TEST_CASE("retries exhaust into ProviderError") {
    MockProvider provider(100);
    CompletionClient client(provider.base_url(), "test-key", fresh_dir("exhaust"),
                            GatewayMode::live, RetryPolicy{3, 1});
    CHECK_THROWS_AS(client.complete(sample_request()), ProviderError);
    CHECK(provider.hits == 3);
}

TEST_CASE("provider response parsing extracts logprobs when asked") {
    json body = completion_body("hi there");
    body["choices"][0]["logprobs"] =
        json{{"content", json::array({json{{"token", "hi"}, {"logprob", -0.1}},
                                      json{{"token", " there"}, {"logprob", -0.4}}})}};
    auto with = parse_provider_response(body, true);
    REQUIRE(with.token_logprobs.has_value());
    CHECK(with.token_logprobs->size() == 2);
    CHECK((*with.token_logprobs)[1].logprob == doctest::Approx(-0.4));

    auto without = parse_provider_response(body, false);
    CHECK_FALSE(without.token_logprobs.has_value());

    CHECK_THROWS_AS(parse_provider_response(json{{"error", "boom"}}, false), ProviderError);
}
