#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <thread>

#include <nlohmann/json.hpp>

#include "sumeval/errors.hpp"
#include "sumeval/llm_gateway.hpp"
#include "support/test_support.hpp"

using namespace sumeval;
using namespace sumeval::testing;

namespace {

GatewayOptions fast_options() {
    GatewayOptions options;
    options.backoff_base = std::chrono::milliseconds(0);
    options.clock = [] { return std::string("1970-01-01T00:00:00Z"); };
    return options;
}

}  // namespace

TEST_CASE("canonical_key is stable and content-sensitive") {
    const ChatRequest request = user_request("judge", "Hello");

    CHECK(canonical_key(request) == canonical_key(request));
    CHECK(canonical_key(request).size() == 64);  // lowercase hex sha-256
    for (char c : canonical_key(request)) {
        CHECK(((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f')));
    }

    ChatRequest tweaked = request;
    tweaked.messages[0].content = "Hello!";
    CHECK(canonical_key(tweaked) != canonical_key(request));

    ChatRequest other_model = request;
    other_model.model = "other";
    CHECK(canonical_key(other_model) != canonical_key(request));

    ChatRequest with_cap = request;
    with_cap.max_tokens = 128;
    CHECK(canonical_key(with_cap) != canonical_key(request));
}

TEST_CASE("canonical serialization is insensitive to field order in file form") {
    // Same request content spelled with different key orders must reduce to
    // one canonical byte string.
    const std::string canonical = canonical_request_json(user_request("judge", "Hi"));
    const auto parsed = nlohmann::json::parse(canonical);
    const auto reordered = nlohmann::json::parse(
        R"({"temperature":0.0,"provider_id":"judge","messages":[{"content":"Hi","role":"user"}],"model":"test-model"})");
    CHECK(parsed == reordered);
    CHECK(reordered.dump() == canonical);  // sorted-key dump is the canonical form
}

TEST_CASE("record then replay round-trips outcomes byte for byte") {
    TempDir dir("gateway");
    auto transport = std::make_shared<ScriptedTransport>();
    transport->script("Hello", ChatOutcome::text("Hi there \xE2\x9C\x93 bytes"));
    auto cassette = std::make_shared<Cassette>(dir.file("cassette.jsonl"));
    cassette->load();

    LlmGateway gateway(transport, cassette, fast_options());
    gateway.register_provider(test_profile());

    const ChatRequest request = user_request("judge", "Hello");
    const ChatOutcome live = gateway.complete(request, CacheMode::record);
    REQUIRE(live.ok());

    // Fresh gateway + cassette loaded from disk; no transport involvement.
    auto counting = std::make_shared<ScriptedTransport>();
    auto cassette2 = std::make_shared<Cassette>(dir.file("cassette.jsonl"));
    cassette2->load();
    LlmGateway replay_gateway(counting, cassette2, fast_options());
    replay_gateway.register_provider(test_profile());

    const ChatOutcome replayed = replay_gateway.complete(request, CacheMode::replay);
    CHECK(replayed == live);
    CHECK(replayed.content == "Hi there \xE2\x9C\x93 bytes");
    CHECK(counting->calls.load() == 0);  // replay performs zero network operations
}

TEST_CASE("replay of an absent key is a CacheMiss") {
    TempDir dir("gateway");
    auto cassette = std::make_shared<Cassette>(dir.file("cassette.jsonl"));
    cassette->load();
    LlmGateway gateway(std::make_shared<ScriptedTransport>(), cassette, fast_options());
    gateway.register_provider(test_profile());

    CHECK_THROWS_AS(gateway.complete(user_request("judge", "never recorded"), CacheMode::replay),
                    CacheMiss);
}

TEST_CASE("recorded ContentFiltered replays as ContentFiltered") {
    TempDir dir("gateway");
    auto transport = std::make_shared<ScriptedTransport>();
    transport->script("violent topic", ChatOutcome::content_filtered());
    auto cassette = std::make_shared<Cassette>(dir.file("cassette.jsonl"));
    cassette->load();
    LlmGateway gateway(transport, cassette, fast_options());
    gateway.register_provider(test_profile());

    const ChatRequest request = user_request("judge", "violent topic");
    CHECK(gateway.complete(request, CacheMode::record).kind ==
          ChatOutcome::Kind::content_filtered);

    auto cassette2 = std::make_shared<Cassette>(dir.file("cassette.jsonl"));
    cassette2->load();
    LlmGateway replay_gateway(std::make_shared<ScriptedTransport>(), cassette2, fast_options());
    replay_gateway.register_provider(test_profile());
    CHECK(replay_gateway.complete(request, CacheMode::replay).kind ==
          ChatOutcome::Kind::content_filtered);
}

TEST_CASE("transient failures are retried, terminal outcomes are not") {
    SUBCASE("two transient failures then success") {
        auto transport = std::make_shared<SequenceTransport>(std::vector<TransportReply>{
            {ChatOutcome::transport_error("HTTP 503"), true},
            {ChatOutcome::transport_error("HTTP 429"), true},
            {ChatOutcome::text("recovered"), false},
        });
        LlmGateway gateway(transport, nullptr, fast_options());
        gateway.register_provider(test_profile());

        const ChatOutcome outcome = gateway.complete(user_request("judge", "x"), CacheMode::live);
        CHECK(outcome.ok());
        CHECK(outcome.content == "recovered");
        CHECK(transport->calls.load() == 3);
    }
    SUBCASE("retries exhaust after max_retries") {
        auto transport = std::make_shared<SequenceTransport>(std::vector<TransportReply>{
            {ChatOutcome::transport_error("HTTP 500"), true},
        });
        LlmGateway gateway(transport, nullptr, fast_options());
        gateway.register_provider(test_profile());

        const ChatOutcome outcome = gateway.complete(user_request("judge", "x"), CacheMode::live);
        CHECK(outcome.kind == ChatOutcome::Kind::transport_error);
        CHECK(transport->calls.load() == 4);  // initial try + 3 retries
    }
    SUBCASE("ContentFiltered is terminal, never retried") {
        auto transport = std::make_shared<SequenceTransport>(std::vector<TransportReply>{
            {ChatOutcome::content_filtered(), false},
            {ChatOutcome::text("should never be reached"), false},
        });
        LlmGateway gateway(transport, nullptr, fast_options());
        gateway.register_provider(test_profile());

        const ChatOutcome outcome = gateway.complete(user_request("judge", "x"), CacheMode::live);
        CHECK(outcome.kind == ChatOutcome::Kind::content_filtered);
        CHECK(transport->calls.load() == 1);
    }
}

TEST_CASE("requests need a user message and a registered provider") {
    LlmGateway gateway(std::make_shared<ScriptedTransport>(), nullptr, fast_options());
    gateway.register_provider(test_profile());

    ChatRequest no_user;
    no_user.provider_id = "judge";
    no_user.model = "test-model";
    no_user.messages.push_back({Role::system, "system only"});
    CHECK_THROWS_AS(gateway.complete(no_user, CacheMode::live), InvalidArg);

    CHECK_THROWS_AS(gateway.complete(user_request("nobody", "x"), CacheMode::live), InvalidArg);
}

TEST_CASE("cassette tolerates a missing file and rejects corrupt records") {
    TempDir dir("cassette");
    Cassette missing(dir.file("absent.jsonl"));
    missing.load();
    CHECK(missing.size() == 0);

    write_file(dir.file("bad.jsonl"), "{\"key\": 42}\n");
    Cassette bad(dir.file("bad.jsonl"));
    CHECK_THROWS_AS(bad.load(), MalformedRecord);
}

TEST_CASE("the per-provider in-flight cap bounds concurrent dispatches") {
    // Transport that tracks the peak number of simultaneous callers.
    class GaugeTransport : public ChatTransport {
      public:
        TransportReply send(const ProviderProfile&, const ChatRequest&) override {
            const int now = active.fetch_add(1) + 1;
            int seen = peak.load();
            while (now > seen && !peak.compare_exchange_weak(seen, now)) {
            }
            std::this_thread::sleep_for(std::chrono::milliseconds(3));
            active.fetch_sub(1);
            return {ChatOutcome::text("ok"), false};
        }
        std::atomic<int> active{0};
        std::atomic<int> peak{0};
    };

    auto transport = std::make_shared<GaugeTransport>();
    LlmGateway gateway(transport, nullptr, fast_options());
    ProviderProfile profile = test_profile();
    profile.max_in_flight = 2;
    gateway.register_provider(profile);

    std::vector<std::thread> threads;
    for (int i = 0; i < 8; ++i) {
        threads.emplace_back([&, i] {
            gateway.complete(user_request("judge", "req " + std::to_string(i)), CacheMode::live);
        });
    }
    for (auto& t : threads) t.join();

    CHECK(transport->peak.load() <= 2);
    CHECK(transport->peak.load() >= 1);
}

TEST_CASE("identical requests recorded twice replay to the latest outcome") {
    TempDir dir("cassette");
    auto cassette = std::make_shared<Cassette>(dir.file("c.jsonl"));
    cassette->load();
    const ChatRequest request = user_request("judge", "dup");
    const std::string key = canonical_key(request);
    cassette->append({key, request, ChatOutcome::text("first"), "t0"});
    cassette->append({key, request, ChatOutcome::text("second"), "t1"});

    Cassette reloaded(dir.file("c.jsonl"));
    reloaded.load();
    REQUIRE(reloaded.lookup(key).has_value());
    CHECK(reloaded.lookup(key)->content == "second");
}
