#pragma once

#include "reviewpulse/http.hpp"

#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>

namespace reviewpulse {

enum class FixtureMode { Record, Replay, Live };

FixtureMode fixture_mode_from_string(std::string_view text);
std::string_view to_string(FixtureMode mode);

// One file per canonical request key holding {key, status, body}. In replay
// mode a missing key is an error, never a network call. Reads are safe from
// several threads; record mode serializes writes.
class FixtureStore {
public:
    FixtureStore(FixtureMode mode, std::filesystem::path directory);

    FixtureMode mode() const { return mode_; }
    const std::filesystem::path& directory() const { return directory_; }
    std::size_t size() const { return entries_.size(); }

    // Replay lookup; throws FixtureMiss in replay mode when absent.
    std::optional<HttpResponse> lookup(const std::string& key) const;

    // Record a live response under its key (record mode only).
    void record(const std::string& key, const HttpResponse& response);

    static std::string file_name_for(const std::string& key);

private:
    void load_all();

    FixtureMode mode_;
    std::filesystem::path directory_;
    std::map<std::string, HttpResponse> entries_;
    mutable std::mutex write_mutex_;
};

} // namespace reviewpulse
