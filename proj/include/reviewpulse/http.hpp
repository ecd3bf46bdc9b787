#pragma once

#include <map>
#include <memory>
#include <string>

namespace reviewpulse {

struct HttpResponse {
    int status = 0;
    std::string body;
    std::map<std::string, std::string> headers; // lowercase keys
};

struct HttpRequest {
    std::string method = "GET";
    std::string host;                           // e.g. "api.github.com"
    std::string path;                           // "/repos/o/n/pulls"
    std::map<std::string, std::string> query;   // sorted by key
    std::map<std::string, std::string> headers;
    std::string body;

    // method + normalized path + sorted query; the stable replay identity
    std::string canonical_key() const;
};

class HttpTransport {
public:
    virtual ~HttpTransport() = default;
    virtual HttpResponse send(const HttpRequest& request) = 0;
};

// HTTPS transport over cpp-httplib. Constructed lazily; only used in
// live/record modes.
std::unique_ptr<HttpTransport> make_live_transport();

} // namespace reviewpulse
