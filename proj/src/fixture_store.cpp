#include "reviewpulse/fixture_store.hpp"

#include "reviewpulse/errors.hpp"

#include <json.hpp>

#include <fstream>

namespace reviewpulse {

FixtureMode fixture_mode_from_string(std::string_view text)
{
    if (text == "record")
        return FixtureMode::Record;
    if (text == "replay")
        return FixtureMode::Replay;
    if (text == "live")
        return FixtureMode::Live;
    throw Error("unknown fixture mode: " + std::string(text));
}

std::string_view to_string(FixtureMode mode)
{
    switch (mode) {
    case FixtureMode::Record:
        return "record";
    case FixtureMode::Replay:
        return "replay";
    case FixtureMode::Live:
        return "live";
    }
    return "live";
}

std::string HttpRequest::canonical_key() const
{
    std::string normalized_path;
    normalized_path.reserve(path.size() + 1);
    if (path.empty() || path.front() != '/')
        normalized_path.push_back('/');
    char prev = '\0';
    for (const char c : path) {
        if (c == '/' && prev == '/')
            continue;
        normalized_path.push_back(c);
        prev = c;
    }
    std::string key = method + " " + normalized_path;
    if (!query.empty()) {
        key.push_back('?');
        bool first = true;
        for (const auto& [name, value] : query) { // std::map iterates sorted
            if (!first)
                key.push_back('&');
            key += name + "=" + value;
            first = false;
        }
    }
    return key;
}

namespace {

    std::uint64_t fnv1a(std::string_view text)
    {
        std::uint64_t hash = 0xcbf29ce484222325ULL;
        for (const char c : text) {
            hash ^= static_cast<unsigned char>(c);
            hash *= 0x100000001b3ULL;
        }
        return hash;
    }

} // namespace

std::string FixtureStore::file_name_for(const std::string& key)
{
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%016llx",
        static_cast<unsigned long long>(fnv1a(key)));
    return std::string(buf) + ".json";
}

FixtureStore::FixtureStore(FixtureMode mode, std::filesystem::path directory)
    : mode_(mode)
    , directory_(std::move(directory))
{
    if (mode_ == FixtureMode::Live)
        return;
    if (mode_ == FixtureMode::Replay) {
        if (!std::filesystem::is_directory(directory_))
            throw Error("replay fixture directory does not exist: " + directory_.string());
        load_all();
    } else {
        std::filesystem::create_directories(directory_);
        if (std::filesystem::is_directory(directory_))
            load_all();
    }
}

void FixtureStore::load_all()
{
    for (const auto& entry : std::filesystem::directory_iterator(directory_)) {
        if (!entry.is_regular_file() || entry.path().extension() != ".json")
            continue;
        std::ifstream in(entry.path());
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            throw Error("unreadable fixture " + entry.path().string() + ": " + e.what());
        }
        HttpResponse response;
        response.status = j.at("status").get<int>();
        response.body = j.at("body").is_string() ? j.at("body").get<std::string>()
                                                 : j.at("body").dump();
        if (j.contains("headers"))
            for (const auto& [name, value] : j["headers"].items())
                response.headers[name] = value.get<std::string>();
        entries_[j.at("key").get<std::string>()] = std::move(response);
    }
}

std::optional<HttpResponse> FixtureStore::lookup(const std::string& key) const
{
    const auto it = entries_.find(key);
    if (it != entries_.end())
        return it->second;
    if (mode_ == FixtureMode::Replay)
        throw FixtureMiss("no fixture recorded for request: " + key);
    return std::nullopt;
}

void FixtureStore::record(const std::string& key, const HttpResponse& response)
{
    if (mode_ != FixtureMode::Record)
        return;
    const std::scoped_lock lock(write_mutex_);
    entries_[key] = response;
    nlohmann::json j {
        { "key", key },
        { "status", response.status },
        { "body", response.body },
    };
    if (!response.headers.empty()) {
        nlohmann::json headers;
        for (const auto& [name, value] : response.headers)
            headers[name] = value;
        j["headers"] = headers;
    }
    std::ofstream out(directory_ / file_name_for(key));
    out << j.dump(2) << "\n";
}

} // namespace reviewpulse
