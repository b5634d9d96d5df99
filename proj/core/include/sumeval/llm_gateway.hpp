#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace sumeval {

enum class Role { system, user, assistant };

std::string to_string(Role role);
Role role_from_string(const std::string& s);

struct ChatMessage {
    Role role = Role::user;
    std::string content;
};

/// One chat-completion call. Every request this harness issues carries
/// temperature 0.
struct ChatRequest {
    std::string provider_id;
    std::string model;
    std::vector<ChatMessage> messages;
    double temperature = 0.0;
    std::optional<int> max_tokens;
};

/// Terminal result of a completion attempt: exactly one variant.
struct ChatOutcome {
    enum class Kind { text, content_filtered, transport_error, malformed_response };

    Kind kind = Kind::transport_error;
    std::string content;  // text only
    std::string detail;   // transport_error / malformed_response only

    static ChatOutcome text(std::string content);
    static ChatOutcome content_filtered();
    static ChatOutcome transport_error(std::string detail);
    static ChatOutcome malformed_response(std::string detail);

    bool ok() const { return kind == Kind::text; }
    bool operator==(const ChatOutcome&) const = default;
};

std::string to_string(ChatOutcome::Kind kind);
ChatOutcome::Kind outcome_kind_from_string(const std::string& s);

struct CacheRecord {
    std::string key;  // lowercase hex SHA-256 of the canonical request serialization
    ChatRequest request;
    ChatOutcome outcome;
    std::string timestamp;  // ISO 8601 UTC; not part of the key
};

/// Canonical serialization of a request: JSON object with sorted keys and
/// max_tokens omitted when absent. Stable across runs and platforms.
std::string canonical_request_json(const ChatRequest& request);

/// Lowercase hex SHA-256 over canonical_request_json.
std::string canonical_key(const ChatRequest& request);

std::string sha256_hex(std::string_view data);

/// One configured chat-completion endpoint.
struct ProviderProfile {
    std::string provider_id;
    std::string endpoint;  // full chat-completions URL
    std::string model;
    std::string api_key_env;  // env var holding the bearer token; may be empty
    // Optional provider-side instruction wrapping; "{prompt}" marks where the
    // user content goes. Applied at dispatch, never part of the cache key.
    std::string instruction_template;
    int max_in_flight = 4;
};

/// What one transport attempt produced and whether the failure is worth retrying.
struct TransportReply {
    ChatOutcome outcome;
    bool transient = false;
};

class ChatTransport {
  public:
    virtual ~ChatTransport() = default;
    virtual TransportReply send(const ProviderProfile& profile, const ChatRequest& request) = 0;
};

/// OpenAI-compatible chat-completions wire client. Maps content-filter
/// signals (HTTP 400 with error code "content_filter", or a 200 whose
/// finish_reason is "content_filter") to ContentFiltered; 429 and 5xx are
/// transient transport errors.
class HttpChatTransport final : public ChatTransport {
  public:
    TransportReply send(const ProviderProfile& profile, const ChatRequest& request) override;
};

/// Append-only JSONL store of CacheRecords. Replay reads come from an
/// immutable snapshot taken at load; appends are serialized through one lock.
class Cassette {
  public:
    explicit Cassette(std::filesystem::path path);

    /// Read all records from disk (missing file == empty store).
    void load();

    std::optional<ChatOutcome> lookup(const std::string& key) const;
    void append(const CacheRecord& record);

    std::size_t size() const { return records_by_key_.size(); }
    const std::filesystem::path& path() const { return path_; }

  private:
    std::filesystem::path path_;
    std::unordered_map<std::string, ChatOutcome> records_by_key_;
    std::mutex write_mutex_;
};

enum class CacheMode { live, record, replay };

std::string to_string(CacheMode mode);
CacheMode cache_mode_from_string(const std::string& s);

struct GatewayOptions {
    int max_retries = 3;  // transient failures only
    std::chrono::milliseconds backoff_base{500};
    std::function<std::string()> clock;  // record timestamps; defaults to UTC now
};

/// Uniform chat-completion client with deterministic record/replay caching,
/// bounded retry, and a per-provider in-flight cap (FIFO admission).
class LlmGateway {
  public:
    LlmGateway(std::shared_ptr<ChatTransport> transport, std::shared_ptr<Cassette> cassette,
               GatewayOptions options = {});
    ~LlmGateway();

    void register_provider(ProviderProfile profile);
    const ProviderProfile& provider(const std::string& provider_id) const;

    /// live: dispatch with retries; record: dispatch, then persist; replay:
    /// cached outcome with zero network use (CacheMiss when absent).
    ChatOutcome complete(const ChatRequest& request, CacheMode mode);

  private:
    class InflightGate;

    ChatOutcome dispatch(const ProviderProfile& profile, const ChatRequest& request);

    std::shared_ptr<ChatTransport> transport_;
    std::shared_ptr<Cassette> cassette_;
    GatewayOptions options_;
    std::unordered_map<std::string, ProviderProfile> profiles_;
    std::unordered_map<std::string, std::unique_ptr<InflightGate>> gates_;
    mutable std::mutex registry_mutex_;
};

}  // namespace sumeval
