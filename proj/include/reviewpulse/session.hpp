#pragma once

#include "reviewpulse/fixture_store.hpp"
#include "reviewpulse/http.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

namespace reviewpulse {

// Handle carrying auth, the fixture policy, and the shared rate-limit budget.
// Safe for concurrent use; replay-mode sessions never touch the network.
class Session {
public:
    Session(std::optional<std::string> token, std::shared_ptr<FixtureStore> store,
        std::unique_ptr<HttpTransport> transport = nullptr);

    FixtureMode mode() const { return store_->mode(); }

    // Issues the request through the fixture policy. GET responses are
    // cached in memory per session so identical fetches return identical
    // bytes without a second round trip.
    HttpResponse request(const HttpRequest& request);

    HttpResponse get(const std::string& path,
        const std::map<std::string, std::string>& query = {});

    std::int64_t remaining_rate_limit() const;

private:
    HttpResponse send_live(const HttpRequest& request);

    std::optional<std::string> token_;
    std::shared_ptr<FixtureStore> store_;
    std::unique_ptr<HttpTransport> transport_;
    mutable std::mutex mutex_;
    std::map<std::string, HttpResponse> cache_;
    std::int64_t remaining_ = -1; // unknown until the first live response
    std::int64_t reset_at_ = 0;
};

// Entry point for the collection layer. Live mode requires a token; replay
// mode requires the fixture directory to exist.
std::shared_ptr<Session> open_session(std::optional<std::string> token,
    std::shared_ptr<FixtureStore> store,
    std::unique_ptr<HttpTransport> transport = nullptr);

} // namespace reviewpulse
