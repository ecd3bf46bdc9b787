#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace reviewpulse {

enum class LineOrigin { Context, Added, Removed };

char origin_marker(LineOrigin origin);

struct HunkLine {
    LineOrigin origin = LineOrigin::Context;
    std::string text;  // without the leading marker
    int old_line = -1; // -1 when not present on that side
    int new_line = -1;

    friend bool operator==(const HunkLine&, const HunkLine&) = default;
};

// One unified-diff hunk. GitHub's diff_hunk payloads are often truncated at
// the commented line, so header counts may exceed the lines actually present;
// parsing is lenient and numbering stops where the lines do.
struct Hunk {
    int old_start = 0;
    int old_count = 0;
    int new_start = 0;
    int new_count = 0;
    std::string heading; // text after the closing @@, if any
    std::vector<HunkLine> lines;

    // highest new-file line number present, or new_start - 1 when none
    int last_new_line() const;
};

// Parses a diff_hunk: "@@ -a,b +c,d @@ heading" followed by marker lines.
// Throws HunkParseError on a malformed header.
Hunk parse_hunk(std::string_view diff_hunk);

// Parses a multi-hunk unified patch body (as returned by compare endpoints).
std::vector<Hunk> parse_patch(std::string_view patch);

// The code a review comment targeted: a contiguous slice of one hunk.
struct ReviewedChange {
    std::string path;
    std::string reviewed_commit;
    int start_line = 0; // inclusive, new-file numbering
    int end_line = 0;
    std::vector<HunkLine> lines;

    std::string render() const; // marker-prefixed lines for prompts/reports
};

// Slices [start, end] in new-file numbering out of the hunk; when start is
// absent, covers [max(hunk.new_start, end - 3), end]. Removed lines
// interleaved within the range are retained. Throws SliceError when end is
// not present in the hunk.
std::vector<HunkLine> slice_hunk(const Hunk& hunk, std::optional<int> start, int end);

} // namespace reviewpulse
