#pragma once

#include <string>
#include <utility>
#include <vector>

namespace sumeval {

struct HttpResponse {
    int status = 0;
    std::string body;
};

using HttpHeaders = std::vector<std::pair<std::string, std::string>>;

/// POST a JSON body to a full URL ("http(s)://host[:port]/path").
/// Returns whatever the server answered; throws IoFailure when no response
/// could be obtained at all (DNS, refused connection, TLS failure).
HttpResponse http_post_json(const std::string& url, const std::string& body,
                            const HttpHeaders& headers);

}  // namespace sumeval
