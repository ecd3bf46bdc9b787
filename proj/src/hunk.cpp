#include "reviewpulse/hunk.hpp"

#include "reviewpulse/errors.hpp"
#include "reviewpulse/text_util.hpp"

#include <algorithm>

namespace reviewpulse {

char origin_marker(LineOrigin origin)
{
    switch (origin) {
    case LineOrigin::Added:
        return '+';
    case LineOrigin::Removed:
        return '-';
    case LineOrigin::Context:
        return ' ';
    }
    return ' ';
}

int Hunk::last_new_line() const
{
    for (auto it = lines.rbegin(); it != lines.rend(); ++it)
        if (it->new_line >= 0)
            return it->new_line;
    return new_start - 1;
}

namespace {

    bool parse_range(std::string_view text, std::size_t& pos, int& start, int& count)
    {
        std::size_t p = pos;
        if (p >= text.size() || text[p] < '0' || text[p] > '9')
            return false;
        long value = 0;
        while (p < text.size() && text[p] >= '0' && text[p] <= '9') {
            value = value * 10 + (text[p] - '0');
            ++p;
        }
        start = static_cast<int>(value);
        count = 1;
        if (p < text.size() && text[p] == ',') {
            ++p;
            if (p >= text.size() || text[p] < '0' || text[p] > '9')
                return false;
            value = 0;
            while (p < text.size() && text[p] >= '0' && text[p] <= '9') {
                value = value * 10 + (text[p] - '0');
                ++p;
            }
            count = static_cast<int>(value);
        }
        pos = p;
        return true;
    }

    Hunk parse_header(std::string_view header)
    {
        Hunk hunk;
        std::size_t pos = 0;
        auto expect = [&](std::string_view token) {
            if (header.substr(pos, token.size()) != token)
                throw HunkParseError("malformed hunk header: " + std::string(header));
            pos += token.size();
        };
        expect("@@ -");
        if (!parse_range(header, pos, hunk.old_start, hunk.old_count))
            throw HunkParseError("malformed hunk header: " + std::string(header));
        expect(" +");
        if (!parse_range(header, pos, hunk.new_start, hunk.new_count))
            throw HunkParseError("malformed hunk header: " + std::string(header));
        expect(" @@");
        if (pos < header.size()) {
            std::string_view rest = header.substr(pos);
            if (!rest.empty() && rest.front() == ' ')
                rest.remove_prefix(1);
            hunk.heading = std::string(rest);
        }
        return hunk;
    }

    void append_body_line(Hunk& hunk, std::string_view line, int& old_line, int& new_line)
    {
        if (line.empty()) {
            // blank context line with the marker stripped by transport
            hunk.lines.push_back({ LineOrigin::Context, "", old_line, new_line });
            ++old_line;
            ++new_line;
            return;
        }
        const char marker = line.front();
        const std::string text(line.substr(1));
        switch (marker) {
        case ' ':
            hunk.lines.push_back({ LineOrigin::Context, text, old_line, new_line });
            ++old_line;
            ++new_line;
            break;
        case '+':
            hunk.lines.push_back({ LineOrigin::Added, text, -1, new_line });
            ++new_line;
            break;
        case '-':
            hunk.lines.push_back({ LineOrigin::Removed, text, old_line, -1 });
            ++old_line;
            break;
        case '\\':
            break; // "\ No newline at end of file"
        default:
            // tolerate unmarked lines as context (seen in truncated payloads)
            hunk.lines.push_back({ LineOrigin::Context, std::string(line), old_line, new_line });
            ++old_line;
            ++new_line;
            break;
        }
    }

} // namespace

Hunk parse_hunk(std::string_view diff_hunk)
{
    const std::vector<std::string> lines = split_lines(normalize_lf(diff_hunk));
    if (lines.empty() || lines.front().substr(0, 2) != "@@")
        throw HunkParseError("diff hunk must begin with an @@ header");
    Hunk hunk = parse_header(lines.front());
    int old_line = hunk.old_start;
    int new_line = hunk.new_start;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (i + 1 == lines.size() && lines[i].empty())
            break; // trailing newline artifact
        append_body_line(hunk, lines[i], old_line, new_line);
    }
    return hunk;
}

std::vector<Hunk> parse_patch(std::string_view patch)
{
    const std::vector<std::string> lines = split_lines(normalize_lf(patch));
    std::vector<Hunk> hunks;
    int old_line = 0, new_line = 0;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::string& line = lines[i];
        if (line.substr(0, 2) == "@@") {
            hunks.push_back(parse_header(line));
            old_line = hunks.back().old_start;
            new_line = hunks.back().new_start;
        } else if (!hunks.empty()) {
            if (i + 1 == lines.size() && line.empty())
                break;
            append_body_line(hunks.back(), line, old_line, new_line);
        }
    }
    return hunks;
}

std::string ReviewedChange::render() const
{
    std::string out;
    for (const HunkLine& line : lines) {
        out.push_back(origin_marker(line.origin));
        out += line.text;
        out.push_back('\n');
    }
    if (!out.empty())
        out.pop_back();
    return out;
}

std::vector<HunkLine> slice_hunk(const Hunk& hunk, std::optional<int> start, int end)
{
    const int last = hunk.last_new_line();
    if (end < hunk.new_start || end > last)
        throw SliceError("line " + std::to_string(end) + " outside hunk range ["
            + std::to_string(hunk.new_start) + ", " + std::to_string(last) + "]");
    int effective_start = start ? *start : std::max(hunk.new_start, end - 3);
    if (effective_start > end)
        throw SliceError("slice start exceeds end");
    effective_start = std::max(effective_start, hunk.new_start);

    std::size_t first_idx = hunk.lines.size(), last_idx = 0;
    for (std::size_t i = 0; i < hunk.lines.size(); ++i) {
        const int n = hunk.lines[i].new_line;
        if (n < 0)
            continue;
        if (n >= effective_start && first_idx == hunk.lines.size())
            first_idx = i;
        if (n <= end)
            last_idx = i;
    }
    if (first_idx == hunk.lines.size() || first_idx > last_idx)
        throw SliceError("no lines in requested range");
    return { hunk.lines.begin() + static_cast<std::ptrdiff_t>(first_idx),
        hunk.lines.begin() + static_cast<std::ptrdiff_t>(last_idx) + 1 };
}

} // namespace reviewpulse
