#include "reviewpulse/time_util.hpp"

#include "reviewpulse/errors.hpp"

#include <array>
#include <cstdio>

namespace reviewpulse {

namespace {

    // days since 1970-01-01 for a civil date (Howard Hinnant's algorithm)
    std::int64_t days_from_civil(std::int64_t y, int m, int d)
    {
        y -= m <= 2;
        const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
        const unsigned yoe = static_cast<unsigned>(y - era * 400);
        const unsigned doy = (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2) / 5 + static_cast<unsigned>(d) - 1;
        const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
        return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
    }

    void civil_from_days(std::int64_t z, std::int64_t& y, int& m, int& d)
    {
        z += 719468;
        const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
        const unsigned doe = static_cast<unsigned>(z - era * 146097);
        const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
        y = static_cast<std::int64_t>(yoe) + era * 400;
        const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
        const unsigned mp = (5 * doy + 2) / 153;
        d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
        m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
        y += m <= 2;
    }

    int parse_digits(std::string_view s, std::size_t pos, int count)
    {
        int value = 0;
        for (int i = 0; i < count; ++i) {
            const char c = pos + i < s.size() ? s[pos + i] : '\0';
            if (c < '0' || c > '9')
                throw DecodeError("invalid RFC 3339 timestamp", std::string(s));
            value = value * 10 + (c - '0');
        }
        return value;
    }

} // namespace

std::int64_t parse_rfc3339(std::string_view text)
{
    // YYYY-MM-DDTHH:MM:SS[.frac](Z|±hh:mm)
    if (text.size() < 20 || text[4] != '-' || text[7] != '-' || (text[10] != 'T' && text[10] != 't' && text[10] != ' ') || text[13] != ':' || text[16] != ':')
        throw DecodeError("invalid RFC 3339 timestamp", std::string(text));

    const int year = parse_digits(text, 0, 4);
    const int month = parse_digits(text, 5, 2);
    const int day = parse_digits(text, 8, 2);
    const int hour = parse_digits(text, 11, 2);
    const int minute = parse_digits(text, 14, 2);
    const int second = parse_digits(text, 17, 2);
    if (month < 1 || month > 12 || day < 1 || day > 31 || hour > 23 || minute > 59 || second > 60)
        throw DecodeError("invalid RFC 3339 timestamp", std::string(text));

    std::size_t pos = 19;
    if (pos < text.size() && text[pos] == '.') {
        ++pos;
        while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9')
            ++pos;
    }
    if (pos >= text.size())
        throw DecodeError("missing timezone in timestamp", std::string(text));

    std::int64_t offset = 0;
    const char tz = text[pos];
    if (tz == 'Z' || tz == 'z') {
        ++pos;
    } else if (tz == '+' || tz == '-') {
        const int oh = parse_digits(text, pos + 1, 2);
        if (pos + 3 >= text.size() || text[pos + 3] != ':')
            throw DecodeError("invalid timezone offset", std::string(text));
        const int om = parse_digits(text, pos + 4, 2);
        offset = static_cast<std::int64_t>(oh) * 3600 + om * 60;
        if (tz == '-')
            offset = -offset;
        pos += 6;
    } else {
        throw DecodeError("invalid timezone in timestamp", std::string(text));
    }
    if (pos != text.size())
        throw DecodeError("trailing characters in timestamp", std::string(text));

    const std::int64_t days = days_from_civil(year, month, day);
    return days * 86400 + hour * 3600 + minute * 60 + second - offset;
}

std::string format_rfc3339(std::int64_t epoch_seconds)
{
    std::int64_t days = epoch_seconds / 86400;
    std::int64_t rem = epoch_seconds % 86400;
    if (rem < 0) {
        rem += 86400;
        --days;
    }
    std::int64_t year;
    int month, day;
    civil_from_days(days, year, month, day);
    const int hour = static_cast<int>(rem / 3600);
    const int minute = static_cast<int>((rem % 3600) / 60);
    const int second = static_cast<int>(rem % 60);
    std::array<char, 32> buf {};
    std::snprintf(buf.data(), buf.size(), "%04lld-%02d-%02dT%02d:%02d:%02dZ",
        static_cast<long long>(year), month, day, hour, minute, second);
    return buf.data();
}

} // namespace reviewpulse
