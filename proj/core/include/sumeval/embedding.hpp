#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

namespace sumeval {

using Vector = std::vector<double>;

struct TokenEmbeddings {
    std::vector<std::string> tokens;
    std::vector<Vector> vectors;  // one per token, all the same dimension
};

/// Contextual token-embedding source. Implementations must be deterministic
/// for a fixed input and must say whether concurrent calls are allowed;
/// callers serialize access to providers that are not (see SerializedEmbedder).
class EmbeddingProvider {
  public:
    virtual ~EmbeddingProvider() = default;
    virtual TokenEmbeddings embed_tokens(const std::string& text) = 0;
    virtual bool concurrent_safe() const = 0;
    virtual std::string name() const = 0;
};

/// Standard cosine similarity in [-1, 1].
/// Throws InvalidArg on dimension mismatch, ZeroVector when either input has
/// no nonzero component.
double cosine(const Vector& u, const Vector& v);

/// Deterministic test/audit provider: each token becomes a basis vector whose
/// index is a pure function of the token bytes (FNV-1a mod dimension). Two
/// tokens collide only on a hash collision, so keep the vocabulary small
/// relative to the dimension when exact token identity matters.
class OneHotEmbedder final : public EmbeddingProvider {
  public:
    explicit OneHotEmbedder(std::size_t dimension = 4096);

    TokenEmbeddings embed_tokens(const std::string& text) override;
    bool concurrent_safe() const override { return true; }
    std::string name() const override { return "one_hot"; }

    std::size_t dimension() const { return dimension_; }
    std::size_t index_of(std::string_view token) const;

  private:
    std::size_t dimension_;
};

/// Client for a remote embedding endpoint. POSTs {"model", "text"} as JSON and
/// expects {"tokens": [...], "vectors": [[...], ...]} back. All failures
/// (transport, HTTP status, malformed body) surface as ProviderFailure.
class RemoteEmbedder final : public EmbeddingProvider {
  public:
    RemoteEmbedder(std::string endpoint_url, std::string model);

    TokenEmbeddings embed_tokens(const std::string& text) override;
    bool concurrent_safe() const override { return false; }
    std::string name() const override { return "remote:" + model_; }

  private:
    std::string endpoint_url_;
    std::string model_;
};

/// Mutex wrapper that makes any provider safe for concurrent callers.
class SerializedEmbedder final : public EmbeddingProvider {
  public:
    explicit SerializedEmbedder(std::shared_ptr<EmbeddingProvider> inner)
        : inner_(std::move(inner)) {}

    TokenEmbeddings embed_tokens(const std::string& text) override {
        std::lock_guard lock(mutex_);
        return inner_->embed_tokens(text);
    }
    bool concurrent_safe() const override { return true; }
    std::string name() const override { return inner_->name(); }

  private:
    std::shared_ptr<EmbeddingProvider> inner_;
    std::mutex mutex_;
};

std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace sumeval
