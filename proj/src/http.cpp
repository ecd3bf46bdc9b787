#include "reviewpulse/http.hpp"

#include "reviewpulse/errors.hpp"

#include <httplib.h>

namespace reviewpulse {

namespace {

    class LiveTransport : public HttpTransport {
    public:
        HttpResponse send(const HttpRequest& request) override
        {
#ifdef CPPHTTPLIB_OPENSSL_SUPPORT
            httplib::SSLClient client(request.host);
#else
            httplib::Client client(request.host);
#endif
            client.set_connection_timeout(30);
            client.set_read_timeout(60);

            httplib::Headers headers;
            for (const auto& [name, value] : request.headers)
                headers.emplace(name, value);

            std::string target = request.path;
            bool first = true;
            for (const auto& [name, value] : request.query) {
                target += (first ? "?" : "&") + name + "=" + value;
                first = false;
            }

            httplib::Result result = request.method == "POST"
                ? client.Post(target, headers, request.body, "application/json")
                : client.Get(target, headers);
            if (!result)
                throw Error("transport failure for " + request.host + target + ": "
                    + httplib::to_string(result.error()));

            HttpResponse response;
            response.status = result->status;
            response.body = result->body;
            for (const auto& [name, value] : result->headers) {
                std::string lower = name;
                for (char& c : lower)
                    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
                response.headers[lower] = value;
            }
            return response;
        }
    };

} // namespace

std::unique_ptr<HttpTransport> make_live_transport()
{
    return std::make_unique<LiveTransport>();
}

} // namespace reviewpulse
