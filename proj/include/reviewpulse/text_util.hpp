#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace reviewpulse {

// Replaces CRLF/CR with LF.
std::string normalize_lf(std::string_view text);

// Splits on '\n'. "a\nb\n" -> {"a", "b", ""} so a '\n' join round-trips.
std::vector<std::string> split_lines(std::string_view text);

std::string join_lines(const std::vector<std::string>& lines);

std::string to_lower_ascii(std::string_view text);

std::string_view trim(std::string_view text);

std::string rtrim(std::string_view text);

bool contains_ci(std::string_view haystack, std::string_view needle);

// Decodes UTF-8, replacing invalid sequences with U+FFFD.
std::vector<char32_t> decode_utf8(std::string_view text);

bool is_valid_utf8(std::string_view text);

// Markdown code spans of a comment body.
struct CodeSpans {
    bool has_inline = false;    // `code`
    bool has_multiline = false; // fenced ``` blocks
    std::size_t code_chars = 0; // characters inside spans/fences, markers excluded
};

CodeSpans extract_code_spans(std::string_view body);

// Strips fenced code blocks, keeping the rest of the text.
std::string strip_fenced_blocks(std::string_view body);

const std::vector<std::string>& english_stopwords();

std::string base64_decode(std::string_view text);
std::string base64_encode(std::string_view data);

} // namespace reviewpulse
