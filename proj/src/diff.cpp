#include "reviewpulse/diff.hpp"

#include "reviewpulse/text_util.hpp"

#include <algorithm>
#include <cstdio>

namespace reviewpulse {

namespace {

    // Myers greedy O(ND) with a saved trace for backtracking.
    // Returns matched index pairs (i in a, j in b) along one shortest script.
    std::vector<std::pair<std::size_t, std::size_t>> lcs_matches(
        const std::vector<std::string>& a, const std::vector<std::string>& b)
    {
        const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(a.size());
        const std::ptrdiff_t m = static_cast<std::ptrdiff_t>(b.size());
        const std::ptrdiff_t max = n + m;
        std::vector<std::vector<std::ptrdiff_t>> trace;
        std::vector<std::ptrdiff_t> v(2 * max + 1, 0);

        std::ptrdiff_t d_final = -1;
        for (std::ptrdiff_t d = 0; d <= max; ++d) {
            trace.push_back(v);
            for (std::ptrdiff_t k = -d; k <= d; k += 2) {
                std::ptrdiff_t x;
                if (k == -d || (k != d && v[k - 1 + max] < v[k + 1 + max]))
                    x = v[k + 1 + max];
                else
                    x = v[k - 1 + max] + 1;
                std::ptrdiff_t y = x - k;
                while (x < n && y < m && a[x] == b[y]) {
                    ++x;
                    ++y;
                }
                v[k + max] = x;
                if (x >= n && y >= m) {
                    d_final = d;
                    break;
                }
            }
            if (d_final >= 0)
                break;
        }

        // Backtrack through the trace collecting diagonal runs.
        std::vector<std::pair<std::size_t, std::size_t>> matches;
        std::ptrdiff_t x = n, y = m;
        for (std::ptrdiff_t d = d_final; d > 0; --d) {
            const std::vector<std::ptrdiff_t>& prev = trace[d];
            const std::ptrdiff_t k = x - y;
            std::ptrdiff_t prev_k;
            if (k == -d || (k != d && prev[k - 1 + max] < prev[k + 1 + max]))
                prev_k = k + 1;
            else
                prev_k = k - 1;
            const std::ptrdiff_t prev_x = prev[prev_k + max];
            const std::ptrdiff_t prev_y = prev_x - prev_k;
            while (x > prev_x && y > prev_y) {
                --x;
                --y;
                matches.emplace_back(x, y);
            }
            if (prev_k == k + 1)
                y = prev_y; // insertion
            else
                x = prev_x; // deletion
        }
        while (x > 0 && y > 0) {
            --x;
            --y;
            matches.emplace_back(x, y);
        }
        std::reverse(matches.begin(), matches.end());
        return matches;
    }

} // namespace

std::vector<LineEdit> text_diff(std::string_view a_text, std::string_view b_text)
{
    const std::string a_norm = normalize_lf(a_text);
    const std::string b_norm = normalize_lf(b_text);
    if (a_norm == b_norm)
        return {};
    const std::vector<std::string> a = split_lines(a_norm);
    const std::vector<std::string> b = split_lines(b_norm);

    const auto matches = lcs_matches(a, b);
    std::vector<LineEdit> edits;
    std::size_t i = 0, j = 0;
    auto flush_gap = [&](std::size_t match_i, std::size_t match_j) {
        while (i < match_i) {
            edits.push_back({ EditOp::Delete, i, a[i] });
            ++i;
        }
        while (j < match_j) {
            edits.push_back({ EditOp::Insert, i, b[j] });
            ++j;
        }
    };
    for (const auto& [mi, mj] : matches) {
        flush_gap(mi, mj);
        ++i;
        ++j;
    }
    flush_gap(a.size(), b.size());
    return edits;
}

std::string apply_edits(std::string_view a_text, const std::vector<LineEdit>& edits)
{
    const std::vector<std::string> a = split_lines(normalize_lf(a_text));
    std::vector<std::string> out;
    out.reserve(a.size());
    std::size_t cursor = 0;
    for (const LineEdit& e : edits) {
        while (cursor < e.line && cursor < a.size())
            out.push_back(a[cursor++]);
        if (e.op == EditOp::Delete)
            ++cursor; // drop a[e.line]
        else
            out.push_back(e.text);
    }
    while (cursor < a.size())
        out.push_back(a[cursor++]);
    return join_lines(out);
}

std::string render_edits(std::string_view a_text, const std::vector<LineEdit>& edits,
    std::size_t context)
{
    if (edits.empty())
        return "";
    const std::vector<std::string> a = split_lines(normalize_lf(a_text));

    // group edits into hunks separated by more than 2*context unchanged lines
    struct Row {
        char tag;
        std::size_t a_line;
        const std::string* text;
    };
    std::vector<Row> rows;
    std::size_t cursor = 0;
    for (const LineEdit& e : edits) {
        while (cursor < e.line && cursor < a.size()) {
            rows.push_back({ ' ', cursor, &a[cursor] });
            ++cursor;
        }
        if (e.op == EditOp::Delete) {
            rows.push_back({ '-', cursor, &a[cursor] });
            ++cursor;
        } else {
            rows.push_back({ '+', cursor, &e.text });
        }
    }
    while (cursor < a.size()) {
        rows.push_back({ ' ', cursor, &a[cursor] });
        ++cursor;
    }

    std::vector<char> keep(rows.size(), 0);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].tag == ' ')
            continue;
        const std::size_t lo = r >= context ? r - context : 0;
        const std::size_t hi = std::min(rows.size(), r + context + 1);
        for (std::size_t k = lo; k < hi; ++k)
            keep[k] = 1;
    }

    std::string out;
    std::size_t r = 0;
    while (r < rows.size()) {
        if (!keep[r]) {
            ++r;
            continue;
        }
        const std::size_t start = r;
        std::size_t end = r;
        while (end < rows.size() && keep[end])
            ++end;
        std::size_t old_start = 0, old_count = 0, new_count = 0;
        bool first = true;
        std::ptrdiff_t delta_before = 0;
        for (std::size_t k = 0; k < start; ++k) {
            if (rows[k].tag == '+')
                ++delta_before;
            else if (rows[k].tag == '-')
                --delta_before;
        }
        for (std::size_t k = start; k < end; ++k) {
            if (rows[k].tag != '+') {
                if (first) {
                    old_start = rows[k].a_line + 1;
                    first = false;
                }
                ++old_count;
            }
            if (rows[k].tag != '-')
                ++new_count;
        }
        if (first)
            old_start = start < rows.size() ? rows[start].a_line + 1 : 1;
        const std::size_t new_start = static_cast<std::size_t>(
            static_cast<std::ptrdiff_t>(old_start) + delta_before);
        char header[64];
        std::snprintf(header, sizeof(header), "@@ -%zu,%zu +%zu,%zu @@",
            old_start, old_count, new_start, new_count);
        out += header;
        out.push_back('\n');
        for (std::size_t k = start; k < end; ++k) {
            out.push_back(rows[k].tag);
            out += *rows[k].text;
            out.push_back('\n');
        }
        r = end;
    }
    if (!out.empty() && out.back() == '\n')
        out.pop_back();
    return out;
}

} // namespace reviewpulse
