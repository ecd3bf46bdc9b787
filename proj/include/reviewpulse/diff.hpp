#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace reviewpulse {

enum class EditOp { Insert, Delete };

// One line-level edit against the original text `a`.
// Delete: removes line `line` of a. Insert: inserts `text` before line `line`
// of a (line == a.size() appends). Edits are emitted in application order.
struct LineEdit {
    EditOp op;
    std::size_t line;
    std::string text;

    friend bool operator==(const LineEdit&, const LineEdit&) = default;
};

// Minimal line-level edit script (Myers O(ND)); deterministic.
// Inputs are LF-normalized before diffing; diff(a, a) is empty.
std::vector<LineEdit> text_diff(std::string_view a, std::string_view b);

// Applies an edit script produced by text_diff(a, b) to a, yielding b
// (LF-normalized).
std::string apply_edits(std::string_view a, const std::vector<LineEdit>& edits);

// Renders an edit script as unified-diff style lines for prompts and reports.
std::string render_edits(std::string_view a, const std::vector<LineEdit>& edits,
    std::size_t context = 3);

} // namespace reviewpulse
