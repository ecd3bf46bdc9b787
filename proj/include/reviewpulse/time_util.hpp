#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace reviewpulse {

// RFC 3339 timestamps, normalized to UTC and second precision at ingestion.
// Parses "2024-05-01T12:00:00Z", fractional seconds, and numeric offsets.
std::int64_t parse_rfc3339(std::string_view text);

// Formats epoch seconds as "YYYY-MM-DDTHH:MM:SSZ".
std::string format_rfc3339(std::int64_t epoch_seconds);

} // namespace reviewpulse
