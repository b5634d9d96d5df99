#include "sumeval/llm_gateway.hpp"

#include <openssl/evp.h>

#include <cstdlib>
#include <ctime>
#include <fstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "sumeval/errors.hpp"
#include "sumeval/http_client.hpp"

namespace sumeval {

using nlohmann::json;

// ---------------------------------------------------------------------------
// enums and small types

std::string to_string(Role role) {
    switch (role) {
        case Role::system: return "system";
        case Role::user: return "user";
        case Role::assistant: return "assistant";
    }
    throw InvalidArg("unknown role");
}

Role role_from_string(const std::string& s) {
    if (s == "system") return Role::system;
    if (s == "user") return Role::user;
    if (s == "assistant") return Role::assistant;
    throw InvalidArg("unknown role: " + s);
}

ChatOutcome ChatOutcome::text(std::string content) {
    return {Kind::text, std::move(content), {}};
}
ChatOutcome ChatOutcome::content_filtered() { return {Kind::content_filtered, {}, {}}; }
ChatOutcome ChatOutcome::transport_error(std::string detail) {
    return {Kind::transport_error, {}, std::move(detail)};
}
ChatOutcome ChatOutcome::malformed_response(std::string detail) {
    return {Kind::malformed_response, {}, std::move(detail)};
}

std::string to_string(ChatOutcome::Kind kind) {
    switch (kind) {
        case ChatOutcome::Kind::text: return "text";
        case ChatOutcome::Kind::content_filtered: return "content_filtered";
        case ChatOutcome::Kind::transport_error: return "transport_error";
        case ChatOutcome::Kind::malformed_response: return "malformed_response";
    }
    throw InvalidArg("unknown outcome kind");
}

ChatOutcome::Kind outcome_kind_from_string(const std::string& s) {
    if (s == "text") return ChatOutcome::Kind::text;
    if (s == "content_filtered") return ChatOutcome::Kind::content_filtered;
    if (s == "transport_error") return ChatOutcome::Kind::transport_error;
    if (s == "malformed_response") return ChatOutcome::Kind::malformed_response;
    throw InvalidArg("unknown outcome kind: " + s);
}

std::string to_string(CacheMode mode) {
    switch (mode) {
        case CacheMode::live: return "live";
        case CacheMode::record: return "record";
        case CacheMode::replay: return "replay";
    }
    throw InvalidArg("unknown cache mode");
}

CacheMode cache_mode_from_string(const std::string& s) {
    if (s == "live") return CacheMode::live;
    if (s == "record") return CacheMode::record;
    if (s == "replay") return CacheMode::replay;
    throw InvalidArg("unknown cache mode: " + s);
}

// ---------------------------------------------------------------------------
// canonical serialization and hashing

namespace {

json request_to_json(const ChatRequest& request) {
    json messages = json::array();
    for (const auto& msg : request.messages) {
        messages.push_back({{"role", to_string(msg.role)}, {"content", msg.content}});
    }
    json j = {{"provider_id", request.provider_id},
              {"model", request.model},
              {"messages", std::move(messages)},
              {"temperature", request.temperature}};
    if (request.max_tokens) j["max_tokens"] = *request.max_tokens;
    return j;
}

json outcome_to_json(const ChatOutcome& outcome) {
    json j = {{"kind", to_string(outcome.kind)}};
    if (outcome.kind == ChatOutcome::Kind::text) j["content"] = outcome.content;
    if (!outcome.detail.empty()) j["detail"] = outcome.detail;
    return j;
}

ChatOutcome outcome_from_json(const json& j) {
    ChatOutcome outcome;
    outcome.kind = outcome_kind_from_string(j.at("kind").get<std::string>());
    if (j.contains("content")) outcome.content = j["content"].get<std::string>();
    if (j.contains("detail")) outcome.detail = j["detail"].get<std::string>();
    return outcome;
}

std::string utc_now_iso8601() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace

std::string sha256_hex(std::string_view data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw Error("SHA-256 digest failed");
    }
    static const char* hex = "0123456789abcdef";
    std::string out(len * 2, '0');
    for (unsigned int i = 0; i < len; ++i) {
        out[2 * i] = hex[digest[i] >> 4];
        out[2 * i + 1] = hex[digest[i] & 0xf];
    }
    return out;
}

std::string canonical_request_json(const ChatRequest& request) {
    // nlohmann objects are std::map-backed, so dump() emits sorted keys.
    return request_to_json(request).dump();
}

std::string canonical_key(const ChatRequest& request) {
    return sha256_hex(canonical_request_json(request));
}

// ---------------------------------------------------------------------------
// HTTP transport

namespace {

std::string apply_instruction_template(const std::string& tmpl, const std::string& content) {
    if (tmpl.empty()) return content;
    const std::string placeholder = "{prompt}";
    const auto pos = tmpl.find(placeholder);
    if (pos == std::string::npos) return tmpl + content;
    std::string out = tmpl;
    out.replace(pos, placeholder.size(), content);
    return out;
}

}  // namespace

TransportReply HttpChatTransport::send(const ProviderProfile& profile, const ChatRequest& request) {
    json messages = json::array();
    for (const auto& msg : request.messages) {
        std::string content = msg.content;
        if (msg.role == Role::user) {
            content = apply_instruction_template(profile.instruction_template, content);
        }
        messages.push_back({{"role", to_string(msg.role)}, {"content", std::move(content)}});
    }
    json body = {{"model", request.model},
                 {"messages", std::move(messages)},
                 {"temperature", request.temperature}};
    if (request.max_tokens) body["max_tokens"] = *request.max_tokens;

    HttpHeaders headers;
    if (!profile.api_key_env.empty()) {
        if (const char* key = std::getenv(profile.api_key_env.c_str()); key && *key) {
            headers.emplace_back("Authorization", std::string("Bearer ") + key);
        }
    }

    HttpResponse resp;
    try {
        resp = http_post_json(profile.endpoint, body.dump(), headers);
    } catch (const Error& e) {
        return {ChatOutcome::transport_error(e.what()), /*transient=*/true};
    }

    if (resp.status == 200) {
        try {
            const json j = json::parse(resp.body);
            const auto& choice = j.at("choices").at(0);
            if (choice.value("finish_reason", "") == "content_filter") {
                return {ChatOutcome::content_filtered(), false};
            }
            return {ChatOutcome::text(choice.at("message").at("content").get<std::string>()), false};
        } catch (const json::exception& e) {
            return {ChatOutcome::malformed_response(e.what()), false};
        }
    }

    if (resp.status == 400) {
        // Azure-style content filter rejection arrives as a 400 error payload.
        try {
            const json j = json::parse(resp.body);
            if (j.contains("error") && j["error"].value("code", "") == "content_filter") {
                return {ChatOutcome::content_filtered(), false};
            }
        } catch (const json::exception&) {
            // fall through to the generic 400 handling
        }
    }

    const bool transient = resp.status == 429 || resp.status >= 500;
    return {ChatOutcome::transport_error("HTTP " + std::to_string(resp.status)), transient};
}

// ---------------------------------------------------------------------------
// cassette

Cassette::Cassette(std::filesystem::path path) : path_(std::move(path)) {}

void Cassette::load() {
    records_by_key_.clear();
    std::ifstream in(path_);
    if (!in) return;  // nothing recorded yet

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            const json j = json::parse(line);
            records_by_key_[j.at("key").get<std::string>()] = outcome_from_json(j.at("outcome"));
        } catch (const json::exception& e) {
            throw MalformedRecord(line_no, std::string("bad cassette record: ") + e.what());
        }
    }
}

std::optional<ChatOutcome> Cassette::lookup(const std::string& key) const {
    auto it = records_by_key_.find(key);
    if (it == records_by_key_.end()) return std::nullopt;
    return it->second;
}

void Cassette::append(const CacheRecord& record) {
    json j = {{"key", record.key},
              {"request", request_to_json(record.request)},
              {"outcome", outcome_to_json(record.outcome)},
              {"timestamp", record.timestamp}};
    std::lock_guard lock(write_mutex_);
    std::ofstream out(path_, std::ios::app);
    if (!out) throw IoFailure("cannot open cassette for append: " + path_.string());
    out << j.dump() << '\n';
    if (!out) throw IoFailure("write failed on cassette: " + path_.string());
    records_by_key_[record.key] = record.outcome;
}

// ---------------------------------------------------------------------------
// gateway

// FIFO admission gate: tickets are served strictly in acquire order, with at
// most `cap` outstanding at once.
class LlmGateway::InflightGate {
  public:
    explicit InflightGate(int cap) : cap_(cap > 0 ? cap : 1) {}

    void acquire() {
        std::unique_lock lock(mutex_);
        const std::uint64_t ticket = next_ticket_++;
        cv_.wait(lock, [&] { return ticket < completed_ + static_cast<std::uint64_t>(cap_); });
    }

    void release() {
        std::lock_guard lock(mutex_);
        ++completed_;
        cv_.notify_all();
    }

  private:
    int cap_;
    std::uint64_t next_ticket_ = 0;
    std::uint64_t completed_ = 0;
    std::mutex mutex_;
    std::condition_variable cv_;
};

LlmGateway::LlmGateway(std::shared_ptr<ChatTransport> transport, std::shared_ptr<Cassette> cassette,
                       GatewayOptions options)
    : transport_(std::move(transport)), cassette_(std::move(cassette)), options_(std::move(options)) {
    if (!options_.clock) options_.clock = utc_now_iso8601;
}

LlmGateway::~LlmGateway() = default;

void LlmGateway::register_provider(ProviderProfile profile) {
    std::lock_guard lock(registry_mutex_);
    gates_[profile.provider_id] = std::make_unique<InflightGate>(profile.max_in_flight);
    profiles_[profile.provider_id] = std::move(profile);
}

const ProviderProfile& LlmGateway::provider(const std::string& provider_id) const {
    std::lock_guard lock(registry_mutex_);
    auto it = profiles_.find(provider_id);
    if (it == profiles_.end()) throw InvalidArg("unknown provider: " + provider_id);
    return it->second;
}

ChatOutcome LlmGateway::dispatch(const ProviderProfile& profile, const ChatRequest& request) {
    TransportReply reply;
    for (int attempt = 0;; ++attempt) {
        reply = transport_->send(profile, request);
        if (!reply.transient || attempt >= options_.max_retries) break;
        if (options_.backoff_base.count() > 0) {
            std::this_thread::sleep_for(options_.backoff_base * (1 << attempt));
        }
    }
    return reply.outcome;
}

ChatOutcome LlmGateway::complete(const ChatRequest& request, CacheMode mode) {
    bool has_user = false;
    for (const auto& m : request.messages) has_user |= (m.role == Role::user);
    if (!has_user) throw InvalidArg("chat request needs at least one user message");

    const std::string key = canonical_key(request);

    if (mode == CacheMode::replay) {
        if (!cassette_) throw CacheMiss("replay mode without a cassette");
        auto cached = cassette_->lookup(key);
        if (!cached) throw CacheMiss("no cassette record for key " + key);
        return *cached;
    }

    const ProviderProfile profile = provider(request.provider_id);
    InflightGate* gate = nullptr;
    {
        std::lock_guard lock(registry_mutex_);
        gate = gates_.at(request.provider_id).get();
    }

    gate->acquire();
    ChatOutcome outcome;
    try {
        outcome = dispatch(profile, request);
    } catch (...) {
        gate->release();
        throw;
    }
    gate->release();

    if (mode == CacheMode::record) {
        if (!cassette_) throw InvalidArg("record mode without a cassette");
        cassette_->append({key, request, outcome, options_.clock()});
    }
    return outcome;
}

}  // namespace sumeval
