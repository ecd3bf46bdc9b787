#include <doctest.h>

#include "reviewpulse/diff.hpp"
#include "reviewpulse/rng.hpp"
#include "reviewpulse/text_util.hpp"

#include <string>
#include <vector>

using namespace reviewpulse;

namespace {

std::string random_text(Rng& rng, std::size_t max_lines)
{
    const std::size_t n = rng.below(max_lines + 1);
    std::string out;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t len = rng.below(6);
        for (std::size_t j = 0; j < len; ++j)
            out.push_back(static_cast<char>('a' + rng.below(4)));
        out.push_back('\n');
    }
    if (!out.empty() && rng.below(2) == 0)
        out.pop_back(); // sometimes no trailing newline
    return out;
}

std::string mutate(Rng& rng, const std::string& text)
{
    std::vector<std::string> lines = split_lines(text);
    const std::size_t edits = rng.below(5);
    for (std::size_t e = 0; e < edits; ++e) {
        const std::size_t kind = rng.below(3);
        if (kind == 0 && !lines.empty()) {
            lines.erase(lines.begin() + static_cast<std::ptrdiff_t>(rng.below(lines.size())));
        } else if (kind == 1) {
            lines.insert(lines.begin() + static_cast<std::ptrdiff_t>(rng.below(lines.size() + 1)),
                std::string(1, static_cast<char>('a' + rng.below(4))));
        } else if (!lines.empty()) {
            lines[rng.below(lines.size())] += "x";
        }
    }
    return join_lines(lines);
}

} // namespace

TEST_CASE("diff of identical texts is empty")
{
    CHECK(text_diff("", "").empty());
    CHECK(text_diff("a\nb\n", "a\nb\n").empty());
    const std::string text = "one\ntwo\nthree";
    CHECK(text_diff(text, text).empty());
}

TEST_CASE("single inserted line yields a single insert edit")
{
    const auto edits = text_diff("a\nb\n", "a\nnew\nb\n");
    REQUIRE(edits.size() == 1);
    CHECK(edits[0].op == EditOp::Insert);
    CHECK(edits[0].line == 1);
    CHECK(edits[0].text == "new");
}

TEST_CASE("single deleted line yields a single delete edit")
{
    const auto edits = text_diff("a\nb\nc\n", "a\nc\n");
    REQUIRE(edits.size() == 1);
    CHECK(edits[0].op == EditOp::Delete);
    CHECK(edits[0].line == 1);
}

TEST_CASE("apply-patch round trip on random pairs")
{
    Rng rng(20240501);
    for (int iter = 0; iter < 1000; ++iter) {
        const std::string a = random_text(rng, 50);
        const std::string b = rng.below(4) == 0 ? random_text(rng, 50) : mutate(rng, a);
        const auto edits = text_diff(a, b);
        CHECK(apply_edits(a, edits) == normalize_lf(b));
    }
}

TEST_CASE("diff is minimal on a known pair")
{
    // one replacement = 1 delete + 1 insert
    const auto edits = text_diff("a\nb\nc\n", "a\nB\nc\n");
    CHECK(edits.size() == 2);
}

TEST_CASE("crlf input is normalized before diffing")
{
    CHECK(text_diff("a\r\nb\r\n", "a\nb\n").empty());
}

TEST_CASE("render_edits emits unified-style hunks")
{
    const std::string a = "1\n2\n3\n4\n5\n6\n7\n8\n9\n10\n";
    const std::string b = "1\n2\n3\n4x\n5\n6\n7\n8\n9\n10\n";
    const std::string rendered = render_edits(a, text_diff(a, b));
    CHECK(rendered.find("@@") == 0);
    CHECK(rendered.find("-4\n") != std::string::npos);
    CHECK(rendered.find("+4x") != std::string::npos);
    CHECK(render_edits(a, {}).empty());
}
