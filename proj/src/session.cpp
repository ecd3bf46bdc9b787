#include "reviewpulse/session.hpp"

#include "reviewpulse/errors.hpp"

#include <chrono>
#include <thread>

namespace reviewpulse {

Session::Session(std::optional<std::string> token, std::shared_ptr<FixtureStore> store,
    std::unique_ptr<HttpTransport> transport)
    : token_(std::move(token))
    , store_(std::move(store))
    , transport_(std::move(transport))
{
}

std::shared_ptr<Session> open_session(std::optional<std::string> token,
    std::shared_ptr<FixtureStore> store,
    std::unique_ptr<HttpTransport> transport)
{
    if (!store)
        throw Error("open_session: fixture store required");
    const FixtureMode mode = store->mode();
    if (mode != FixtureMode::Replay && !token)
        throw Error("token required for " + std::string(to_string(mode))
            + " mode (set REVIEWPULSE_TOKEN)");
    if (mode != FixtureMode::Replay && !transport)
        transport = make_live_transport();
    return std::make_shared<Session>(std::move(token), std::move(store), std::move(transport));
}

HttpResponse Session::get(const std::string& path,
    const std::map<std::string, std::string>& query)
{
    HttpRequest request;
    request.method = "GET";
    request.host = "api.github.com";
    request.path = path;
    request.query = query;
    return this->request(request);
}

HttpResponse Session::request(const HttpRequest& request)
{
    const std::string key = request.canonical_key();
    const bool cacheable = request.method == "GET";

    if (cacheable) {
        const std::scoped_lock lock(mutex_);
        const auto it = cache_.find(key);
        if (it != cache_.end())
            return it->second;
    }

    HttpResponse response;
    const std::optional<HttpResponse> recorded = store_->lookup(key);
    if (recorded) {
        response = *recorded;
    } else {
        response = send_live(request);
        store_->record(key, response);
    }

    if (cacheable) {
        const std::scoped_lock lock(mutex_);
        cache_.emplace(key, response);
    }
    return response;
}

HttpResponse Session::send_live(const HttpRequest& request)
{
    if (!transport_)
        throw Error("no transport available for live request: " + request.canonical_key());

    HttpRequest outgoing = request;
    outgoing.headers["Accept"] = "application/vnd.github+json";
    outgoing.headers["User-Agent"] = "reviewpulse";
    if (token_)
        outgoing.headers["Authorization"] = "Bearer " + *token_;

    // token bucket honoring the server's remaining/reset headers, with
    // bounded retry on 403/429
    for (int attempt = 0;; ++attempt) {
        {
            const std::scoped_lock lock(mutex_);
            if (remaining_ == 0) {
                const auto now = std::chrono::system_clock::now();
                const auto reset = std::chrono::system_clock::from_time_t(
                    static_cast<std::time_t>(reset_at_));
                if (reset > now)
                    std::this_thread::sleep_for(
                        std::min(reset - now, std::chrono::system_clock::duration(
                                                  std::chrono::seconds(60))));
                remaining_ = -1;
            }
        }
        const HttpResponse response = transport_->send(outgoing);
        {
            const std::scoped_lock lock(mutex_);
            const auto rem = response.headers.find("x-ratelimit-remaining");
            if (rem != response.headers.end())
                remaining_ = std::strtoll(rem->second.c_str(), nullptr, 10);
            const auto reset = response.headers.find("x-ratelimit-reset");
            if (reset != response.headers.end())
                reset_at_ = std::strtoll(reset->second.c_str(), nullptr, 10);
        }
        const bool throttled = response.status == 403 || response.status == 429;
        if (!throttled)
            return response;
        if (attempt >= 3)
            throw RateLimitExhausted("rate limit exhausted after retries: "
                + request.canonical_key());
        std::this_thread::sleep_for(std::chrono::seconds(1 << attempt));
    }
}

std::int64_t Session::remaining_rate_limit() const
{
    const std::scoped_lock lock(mutex_);
    return remaining_;
}

} // namespace reviewpulse
