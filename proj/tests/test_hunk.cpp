#include <doctest.h>

#include "reviewpulse/errors.hpp"
#include "reviewpulse/hunk.hpp"

#include <string>

using namespace reviewpulse;

namespace {

// hunk starting at new-file line 5 with 8 context/added lines and one removal
const char* kHunk = "@@ -5,7 +5,8 @@ void f()\n"
                    " l5\n"
                    " l6\n"
                    "-old7\n"
                    "+l7\n"
                    "+l8\n"
                    " l9\n"
                    " l10\n"
                    " l11\n"
                    " l12\n";

} // namespace

TEST_CASE("parse_hunk reads header ranges and heading")
{
    const Hunk hunk = parse_hunk(kHunk);
    CHECK(hunk.old_start == 5);
    CHECK(hunk.old_count == 7);
    CHECK(hunk.new_start == 5);
    CHECK(hunk.new_count == 8);
    CHECK(hunk.heading == "void f()");
    CHECK(hunk.lines.size() == 9);
    CHECK(hunk.last_new_line() == 12);
}

TEST_CASE("parse_hunk numbers both sides")
{
    const Hunk hunk = parse_hunk(kHunk);
    CHECK(hunk.lines[0].new_line == 5);
    CHECK(hunk.lines[2].origin == LineOrigin::Removed);
    CHECK(hunk.lines[2].old_line == 7);
    CHECK(hunk.lines[2].new_line == -1);
    CHECK(hunk.lines[3].origin == LineOrigin::Added);
    CHECK(hunk.lines[3].new_line == 7);
    CHECK(hunk.lines[3].old_line == -1);
}

TEST_CASE("parse_hunk rejects malformed headers")
{
    CHECK_THROWS_AS(parse_hunk("not a hunk"), HunkParseError);
    CHECK_THROWS_AS(parse_hunk("@@ -a,b +c,d @@"), HunkParseError);
    CHECK_THROWS_AS(parse_hunk("@@ -1,2 @@"), HunkParseError);
}

TEST_CASE("single-line slice includes the three preceding lines")
{
    // comment at new-line 10 in a hunk starting at 5 -> lines 7..10
    const Hunk hunk = parse_hunk(kHunk);
    const auto lines = slice_hunk(hunk, std::nullopt, 10);
    REQUIRE(!lines.empty());
    CHECK(lines.front().new_line == 7);
    CHECK(lines.back().new_line == 10);
}

TEST_CASE("three-preceding-lines rule clamps at the hunk start")
{
    const Hunk hunk = parse_hunk(kHunk);
    const auto lines = slice_hunk(hunk, std::nullopt, 6);
    CHECK(lines.front().new_line == 5);
    CHECK(lines.back().new_line == 6);
}

TEST_CASE("range slice covers start..end with interleaved removals")
{
    const Hunk hunk = parse_hunk(kHunk);
    const auto lines = slice_hunk(hunk, 6, 9);
    CHECK(lines.front().new_line == 6);
    CHECK(lines.back().new_line == 9);
    bool saw_removed = false;
    for (const HunkLine& line : lines)
        saw_removed = saw_removed || line.origin == LineOrigin::Removed;
    CHECK(saw_removed);
}

TEST_CASE("slice beyond hunk extent is rejected")
{
    const Hunk hunk = parse_hunk(kHunk);
    CHECK_THROWS_AS(slice_hunk(hunk, std::nullopt, 13), SliceError);
    CHECK_THROWS_AS(slice_hunk(hunk, std::nullopt, 4), SliceError);
    CHECK_THROWS_AS(slice_hunk(hunk, 9, 6), SliceError);
}

TEST_CASE("truncated payloads stop numbering at the last present line")
{
    // header claims 10 new lines, body carries 3
    const Hunk hunk = parse_hunk("@@ -1,10 +1,10 @@\n a\n b\n c\n");
    CHECK(hunk.last_new_line() == 3);
    CHECK_THROWS_AS(slice_hunk(hunk, std::nullopt, 4), SliceError);
    CHECK(slice_hunk(hunk, std::nullopt, 3).size() == 3);
}

TEST_CASE("slice output is a contiguous slice containing line end")
{
    // generated grid of hunk shapes
    for (int new_start = 1; new_start <= 6; ++new_start) {
        for (int added = 0; added <= 2; ++added) {
            for (int removed = 0; removed <= 2; ++removed) {
                std::string text = "@@ -" + std::to_string(new_start) + ",5 +"
                    + std::to_string(new_start) + ",5 @@\n";
                for (int r = 0; r < removed; ++r)
                    text += "-gone\n";
                for (int a = 0; a < added; ++a)
                    text += "+new\n";
                for (int c = 0; c < 4; ++c)
                    text += " ctx\n";
                const Hunk hunk = parse_hunk(text);
                const int last = hunk.last_new_line();
                for (int end = new_start; end <= last; ++end) {
                    const auto lines = slice_hunk(hunk, std::nullopt, end);
                    CHECK(lines.back().new_line == end);
                    const int lo = std::max(new_start, end - 3);
                    CHECK(lines.front().new_line == lo);
                    // contiguity: new-numbered lines advance by one
                    int expect = lo;
                    for (const HunkLine& line : lines) {
                        if (line.new_line >= 0) {
                            CHECK(line.new_line == expect);
                            ++expect;
                        }
                    }
                }
                CHECK_THROWS_AS(slice_hunk(hunk, std::nullopt, last + 1), SliceError);
                CHECK_THROWS_AS(slice_hunk(hunk, std::nullopt, new_start - 1), SliceError);
            }
        }
    }
}

TEST_CASE("parse_patch splits multiple hunks")
{
    const std::string patch = "@@ -1,2 +1,3 @@\n a\n+b\n c\n@@ -10,2 +11,2 @@\n x\n-y\n+z\n";
    const auto hunks = parse_patch(patch);
    REQUIRE(hunks.size() == 2);
    CHECK(hunks[0].new_start == 1);
    CHECK(hunks[1].new_start == 11);
    CHECK(hunks[1].lines.size() == 3);
}
