#include "sumeval/embedding.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

#include "sumeval/errors.hpp"
#include "sumeval/http_client.hpp"
#include "sumeval/lexical_metrics.hpp"

namespace sumeval {

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

double cosine(const Vector& u, const Vector& v) {
    if (u.size() != v.size()) throw InvalidArg("cosine: dimension mismatch");
    double dot = 0.0, nu = 0.0, nv = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        dot += u[i] * v[i];
        nu += u[i] * u[i];
        nv += v[i] * v[i];
    }
    if (nu == 0.0 || nv == 0.0) throw ZeroVector("cosine: zero vector");
    return dot / (std::sqrt(nu) * std::sqrt(nv));
}

OneHotEmbedder::OneHotEmbedder(std::size_t dimension) : dimension_(dimension) {
    if (dimension_ == 0) throw InvalidArg("OneHotEmbedder: dimension must be > 0");
}

std::size_t OneHotEmbedder::index_of(std::string_view token) const {
    return static_cast<std::size_t>(fnv1a64(token) % dimension_);
}

TokenEmbeddings OneHotEmbedder::embed_tokens(const std::string& text) {
    TokenEmbeddings out;
    out.tokens = tokenize(text);
    out.vectors.reserve(out.tokens.size());
    for (const auto& tok : out.tokens) {
        Vector v(dimension_, 0.0);
        v[index_of(tok)] = 1.0;
        out.vectors.push_back(std::move(v));
    }
    return out;
}

RemoteEmbedder::RemoteEmbedder(std::string endpoint_url, std::string model)
    : endpoint_url_(std::move(endpoint_url)), model_(std::move(model)) {}

TokenEmbeddings RemoteEmbedder::embed_tokens(const std::string& text) {
    nlohmann::json body = {{"model", model_}, {"text", text}};

    HttpResponse resp;
    try {
        resp = http_post_json(endpoint_url_, body.dump(), {});
    } catch (const Error& e) {
        throw ProviderFailure(std::string("embedding endpoint unreachable: ") + e.what());
    }
    if (resp.status != 200) {
        throw ProviderFailure("embedding endpoint returned HTTP " + std::to_string(resp.status));
    }

    try {
        const auto json = nlohmann::json::parse(resp.body);
        TokenEmbeddings out;
        out.tokens = json.at("tokens").get<std::vector<std::string>>();
        out.vectors = json.at("vectors").get<std::vector<Vector>>();
        if (out.tokens.size() != out.vectors.size()) {
            throw ProviderFailure("embedding response: token/vector count mismatch");
        }
        for (const auto& v : out.vectors) {
            if (v.empty() || v.size() != out.vectors.front().size()) {
                throw ProviderFailure("embedding response: inconsistent vector dimensions");
            }
        }
        return out;
    } catch (const nlohmann::json::exception& e) {
        throw ProviderFailure(std::string("malformed embedding response: ") + e.what());
    }
}

}  // namespace sumeval
