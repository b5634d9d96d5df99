#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include <atomic>
#include <nlohmann/json.hpp>
#include <thread>

#include "sumeval/embedding.hpp"
#include "sumeval/errors.hpp"
#include "sumeval/llm_gateway.hpp"
#include "support/test_support.hpp"

using namespace sumeval;
using namespace sumeval::testing;
using nlohmann::json;

namespace {

/// In-process HTTP server bound to an ephemeral localhost port.
class LocalServer {
  public:
    LocalServer() {
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }
    ~LocalServer() {
        server_.stop();
        thread_.join();
    }

    httplib::Server& server() { return server_; }
    std::string url(const std::string& path) const {
        return "http://127.0.0.1:" + std::to_string(port_) + path;
    }

  private:
    httplib::Server server_;
    int port_ = 0;
    std::thread thread_;
};

GatewayOptions fast_options() {
    GatewayOptions options;
    options.backoff_base = std::chrono::milliseconds(0);
    options.clock = [] { return std::string("t"); };
    return options;
}

ProviderProfile profile_for(const LocalServer& server, const std::string& id = "judge") {
    ProviderProfile profile = test_profile(id);
    profile.endpoint = server.url("/v1/chat/completions");
    return profile;
}

json chat_response(const std::string& content, const std::string& finish = "stop") {
    return {{"choices",
             json::array({{{"finish_reason", finish}, {"message", {{"content", content}}}}})}};
}

}  // namespace

TEST_CASE("HttpChatTransport speaks the chat-completions wire format") {
    LocalServer server;
    json seen_body;
    std::string seen_auth;
    server.server().Post("/v1/chat/completions",
                         [&](const httplib::Request& req, httplib::Response& res) {
                             seen_body = json::parse(req.body);
                             seen_auth = req.get_header_value("Authorization");
                             res.set_content(chat_response("All clear.").dump(),
                                             "application/json");
                         });

    ::setenv("SUMEVAL_TEST_KEY", "sk-local-test", 1);
    ProviderProfile profile = profile_for(server);
    profile.api_key_env = "SUMEVAL_TEST_KEY";

    HttpChatTransport transport;
    const TransportReply reply = transport.send(profile, user_request("judge", "Ping."));

    REQUIRE(reply.outcome.ok());
    CHECK(reply.outcome.content == "All clear.");
    CHECK(seen_auth == "Bearer sk-local-test");
    CHECK(seen_body["model"] == "test-model");
    CHECK(seen_body["temperature"] == 0.0);
    REQUIRE(seen_body["messages"].size() == 1);
    CHECK(seen_body["messages"][0]["role"] == "user");
    CHECK(seen_body["messages"][0]["content"] == "Ping.");
}

TEST_CASE("instruction templates wrap user content at dispatch only") {
    LocalServer server;
    json seen_body;
    server.server().Post("/v1/chat/completions",
                         [&](const httplib::Request& req, httplib::Response& res) {
                             seen_body = json::parse(req.body);
                             res.set_content(chat_response("ok").dump(), "application/json");
                         });

    ProviderProfile profile = profile_for(server);
    profile.instruction_template = "[INST] {prompt} [/INST]";

    const ChatRequest request = user_request("judge", "Summarize this.");
    HttpChatTransport transport;
    transport.send(profile, request);

    CHECK(seen_body["messages"][0]["content"] == "[INST] Summarize this. [/INST]");
    // The cache key is computed on the unwrapped request.
    CHECK(canonical_request_json(request).find("[INST]") == std::string::npos);
}

TEST_CASE("content filter signals map to ContentFiltered") {
    LocalServer server;
    SUBCASE("Azure-style 400 with error code") {
        server.server().Post("/v1/chat/completions",
                             [&](const httplib::Request&, httplib::Response& res) {
                                 res.status = 400;
                                 res.set_content(
                                     R"({"error":{"code":"content_filter","message":"filtered"}})",
                                     "application/json");
                             });
        HttpChatTransport transport;
        const TransportReply reply = transport.send(profile_for(server), user_request("judge", "x"));
        CHECK(reply.outcome.kind == ChatOutcome::Kind::content_filtered);
        CHECK(!reply.transient);
    }
    SUBCASE("finish_reason content_filter on a 200") {
        server.server().Post("/v1/chat/completions",
                             [&](const httplib::Request&, httplib::Response& res) {
                                 res.set_content(chat_response("", "content_filter").dump(),
                                                 "application/json");
                             });
        HttpChatTransport transport;
        const TransportReply reply = transport.send(profile_for(server), user_request("judge", "x"));
        CHECK(reply.outcome.kind == ChatOutcome::Kind::content_filtered);
    }
}

TEST_CASE("5xx responses are transient and retried by the gateway") {
    LocalServer server;
    std::atomic<int> hits{0};
    server.server().Post("/v1/chat/completions",
                         [&](const httplib::Request&, httplib::Response& res) {
                             if (hits.fetch_add(1) < 2) {
                                 res.status = 503;
                                 res.set_content("overloaded", "text/plain");
                             } else {
                                 res.set_content(chat_response("recovered").dump(),
                                                 "application/json");
                             }
                         });

    LlmGateway gateway(std::make_shared<HttpChatTransport>(), nullptr, fast_options());
    gateway.register_provider(profile_for(server));

    const ChatOutcome outcome = gateway.complete(user_request("judge", "x"), CacheMode::live);
    CHECK(outcome.ok());
    CHECK(outcome.content == "recovered");
    CHECK(hits.load() == 3);
}

TEST_CASE("malformed 200 bodies surface as MalformedResponse") {
    LocalServer server;
    server.server().Post("/v1/chat/completions",
                         [&](const httplib::Request&, httplib::Response& res) {
                             res.set_content("{\"unexpected\": true}", "application/json");
                         });
    HttpChatTransport transport;
    const TransportReply reply = transport.send(profile_for(server), user_request("judge", "x"));
    CHECK(reply.outcome.kind == ChatOutcome::Kind::malformed_response);
    CHECK(!reply.transient);
}

TEST_CASE("unreachable endpoints are transient transport errors") {
    ProviderProfile profile = test_profile();
    profile.endpoint = "http://127.0.0.1:1/v1/chat/completions";
    HttpChatTransport transport;
    const TransportReply reply = transport.send(profile, user_request("judge", "x"));
    CHECK(reply.outcome.kind == ChatOutcome::Kind::transport_error);
    CHECK(reply.transient);
}

TEST_CASE("RemoteEmbedder round-trips tokens and vectors") {
    LocalServer server;
    server.server().Post("/embed", [&](const httplib::Request& req, httplib::Response& res) {
        const json body = json::parse(req.body);
        CHECK(body["model"] == "embed-1");
        json tokens = json::array();
        json vectors = json::array();
        // one vector per whitespace word, trivially derived
        std::istringstream in(body["text"].get<std::string>());
        std::string word;
        while (in >> word) {
            tokens.push_back(word);
            vectors.push_back({static_cast<double>(word.size()), 1.0});
        }
        res.set_content(json{{"tokens", tokens}, {"vectors", vectors}}.dump(),
                        "application/json");
    });

    RemoteEmbedder embedder(server.url("/embed"), "embed-1");
    const TokenEmbeddings out = embedder.embed_tokens("alpha be");
    REQUIRE(out.tokens.size() == 2);
    CHECK(out.tokens[0] == "alpha");
    CHECK(out.vectors[0] == Vector{5.0, 1.0});
    CHECK(out.vectors[1] == Vector{2.0, 1.0});
    CHECK(!embedder.concurrent_safe());
}

TEST_CASE("RemoteEmbedder failures become ProviderFailure") {
    LocalServer server;
    server.server().Post("/embed", [&](const httplib::Request&, httplib::Response& res) {
        res.status = 500;
        res.set_content("boom", "text/plain");
    });
    RemoteEmbedder bad_status(server.url("/embed"), "embed-1");
    CHECK_THROWS_AS(bad_status.embed_tokens("x"), ProviderFailure);

    server.server().Post("/malformed", [&](const httplib::Request&, httplib::Response& res) {
        res.set_content("{\"tokens\":[\"a\"]}", "application/json");
    });
    RemoteEmbedder malformed(server.url("/malformed"), "embed-1");
    CHECK_THROWS_AS(malformed.embed_tokens("x"), ProviderFailure);

    RemoteEmbedder unreachable("http://127.0.0.1:1/embed", "embed-1");
    CHECK_THROWS_AS(unreachable.embed_tokens("x"), ProviderFailure);
}
