#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include "sumeval/http_client.hpp"

#include "sumeval/errors.hpp"

namespace sumeval {

namespace {

struct SplitUrl {
    std::string base;  // scheme://host[:port]
    std::string path;  // /path, "/" when absent
};

SplitUrl split_url(const std::string& url) {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) {
        throw InvalidArg("URL missing scheme: " + url);
    }
    const auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) return {url, "/"};
    return {url.substr(0, path_start), url.substr(path_start)};
}

}  // namespace

HttpResponse http_post_json(const std::string& url, const std::string& body,
                            const HttpHeaders& headers) {
    const SplitUrl split = split_url(url);

    httplib::Client client(split.base);
    client.set_connection_timeout(30);
    client.set_read_timeout(120);

    httplib::Headers hdrs;
    for (const auto& [k, v] : headers) hdrs.emplace(k, v);

    auto result = client.Post(split.path, hdrs, body, "application/json");
    if (!result) {
        throw IoFailure("HTTP POST to " + url + " failed: " + httplib::to_string(result.error()));
    }
    return {result->status, result->body};
}

}  // namespace sumeval
