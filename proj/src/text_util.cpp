#include "reviewpulse/text_util.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace reviewpulse {

std::string normalize_lf(std::string_view text)
{
    std::string out;
    out.reserve(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] == '\r') {
            if (i + 1 < text.size() && text[i + 1] == '\n')
                continue;
            out.push_back('\n');
        } else {
            out.push_back(text[i]);
        }
    }
    return out;
}

std::vector<std::string> split_lines(std::string_view text)
{
    std::vector<std::string> lines;
    std::size_t start = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] == '\n') {
            lines.emplace_back(text.substr(start, i - start));
            start = i + 1;
        }
    }
    lines.emplace_back(text.substr(start));
    return lines;
}

std::string join_lines(const std::vector<std::string>& lines)
{
    std::string out;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (i)
            out.push_back('\n');
        out += lines[i];
    }
    return out;
}

std::string to_lower_ascii(std::string_view text)
{
    std::string out(text);
    std::transform(out.begin(), out.end(), out.begin(),
        [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::string_view trim(std::string_view text)
{
    std::size_t b = 0, e = text.size();
    while (b < e && std::isspace(static_cast<unsigned char>(text[b])))
        ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(text[e - 1])))
        --e;
    return text.substr(b, e - b);
}

std::string rtrim(std::string_view text)
{
    std::size_t e = text.size();
    while (e > 0 && std::isspace(static_cast<unsigned char>(text[e - 1])))
        --e;
    return std::string(text.substr(0, e));
}

bool contains_ci(std::string_view haystack, std::string_view needle)
{
    if (needle.empty())
        return true;
    const std::string h = to_lower_ascii(haystack);
    const std::string n = to_lower_ascii(needle);
    return h.find(n) != std::string::npos;
}

std::vector<char32_t> decode_utf8(std::string_view text)
{
    std::vector<char32_t> out;
    out.reserve(text.size());
    std::size_t i = 0;
    while (i < text.size()) {
        const unsigned char c = static_cast<unsigned char>(text[i]);
        char32_t cp = 0xFFFD;
        std::size_t len = 1;
        if (c < 0x80) {
            cp = c;
        } else if ((c >> 5) == 0x6 && i + 1 < text.size()) {
            cp = static_cast<char32_t>(c & 0x1F) << 6 | (text[i + 1] & 0x3F);
            len = 2;
        } else if ((c >> 4) == 0xE && i + 2 < text.size()) {
            cp = static_cast<char32_t>(c & 0x0F) << 12
                | static_cast<char32_t>(text[i + 1] & 0x3F) << 6
                | (text[i + 2] & 0x3F);
            len = 3;
        } else if ((c >> 3) == 0x1E && i + 3 < text.size()) {
            cp = static_cast<char32_t>(c & 0x07) << 18
                | static_cast<char32_t>(text[i + 1] & 0x3F) << 12
                | static_cast<char32_t>(text[i + 2] & 0x3F) << 6
                | (text[i + 3] & 0x3F);
            len = 4;
        }
        out.push_back(cp);
        i += len;
    }
    return out;
}

bool is_valid_utf8(std::string_view text)
{
    std::size_t i = 0;
    while (i < text.size()) {
        const unsigned char c = static_cast<unsigned char>(text[i]);
        std::size_t len;
        if (c < 0x80)
            len = 1;
        else if ((c >> 5) == 0x6)
            len = 2;
        else if ((c >> 4) == 0xE)
            len = 3;
        else if ((c >> 3) == 0x1E)
            len = 4;
        else
            return false;
        if (i + len > text.size())
            return false;
        for (std::size_t k = 1; k < len; ++k)
            if ((static_cast<unsigned char>(text[i + k]) >> 6) != 0x2)
                return false;
        i += len;
    }
    return true;
}

CodeSpans extract_code_spans(std::string_view body)
{
    CodeSpans spans;
    const std::vector<std::string> lines = split_lines(normalize_lf(body));
    bool in_fence = false;
    std::string outside;
    for (const std::string& line : lines) {
        const std::string_view t = trim(line);
        if (t.substr(0, 3) == "```") {
            if (in_fence) {
                in_fence = false;
            } else {
                in_fence = true;
                spans.has_multiline = true;
            }
            continue;
        }
        if (in_fence) {
            spans.code_chars += line.size();
        } else {
            outside += line;
            outside.push_back('\n');
        }
    }
    // inline spans in the text outside fences
    std::size_t pos = 0;
    while (true) {
        const std::size_t open = outside.find('`', pos);
        if (open == std::string::npos)
            break;
        const std::size_t close = outside.find('`', open + 1);
        if (close == std::string::npos)
            break;
        if (close > open + 1) {
            spans.has_inline = true;
            spans.code_chars += close - open - 1;
        }
        pos = close + 1;
    }
    return spans;
}

std::string strip_fenced_blocks(std::string_view body)
{
    const std::vector<std::string> lines = split_lines(normalize_lf(body));
    std::vector<std::string> kept;
    bool in_fence = false;
    for (const std::string& line : lines) {
        const std::string_view t = trim(line);
        if (t.substr(0, 3) == "```") {
            in_fence = !in_fence;
            continue;
        }
        if (!in_fence)
            kept.push_back(line);
    }
    return join_lines(kept);
}

const std::vector<std::string>& english_stopwords()
{
    static const std::vector<std::string> words = {
        "a", "about", "above", "after", "again", "all", "also", "an", "and",
        "any", "are", "as", "at", "be", "because", "been", "before", "being",
        "below", "between", "both", "but", "by", "can", "could", "did", "do",
        "does", "doing", "down", "during", "each", "few", "for", "from",
        "further", "had", "has", "have", "having", "here", "how", "if", "in",
        "into", "is", "it", "its", "just", "more", "most", "not", "now", "of",
        "off", "on", "once", "only", "or", "other", "our", "out", "over",
        "own", "same", "should", "so", "some", "such", "than", "that", "the",
        "their", "them", "then", "there", "these", "they", "this", "those",
        "through", "to", "too", "under", "until", "up", "very", "was", "we",
        "were", "what", "when", "where", "which", "while", "who", "why",
        "will", "with", "would", "you", "your"
    };
    return words;
}

namespace {
    constexpr std::string_view kB64 = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

    int b64_value(char c)
    {
        if (c >= 'A' && c <= 'Z')
            return c - 'A';
        if (c >= 'a' && c <= 'z')
            return c - 'a' + 26;
        if (c >= '0' && c <= '9')
            return c - '0' + 52;
        if (c == '+')
            return 62;
        if (c == '/')
            return 63;
        return -1;
    }
} // namespace

std::string base64_decode(std::string_view text)
{
    std::string out;
    out.reserve(text.size() / 4 * 3);
    int acc = 0, bits = 0;
    for (const char c : text) {
        const int v = b64_value(c);
        if (v < 0)
            continue; // skip '=', newlines, whitespace
        acc = acc << 6 | v;
        bits += 6;
        if (bits >= 8) {
            bits -= 8;
            out.push_back(static_cast<char>((acc >> bits) & 0xFF));
        }
    }
    return out;
}

std::string base64_encode(std::string_view data)
{
    std::string out;
    out.reserve((data.size() + 2) / 3 * 4);
    std::size_t i = 0;
    while (i + 2 < data.size()) {
        const unsigned v = static_cast<unsigned char>(data[i]) << 16
            | static_cast<unsigned char>(data[i + 1]) << 8
            | static_cast<unsigned char>(data[i + 2]);
        out.push_back(kB64[v >> 18 & 63]);
        out.push_back(kB64[v >> 12 & 63]);
        out.push_back(kB64[v >> 6 & 63]);
        out.push_back(kB64[v & 63]);
        i += 3;
    }
    if (i + 1 == data.size()) {
        const unsigned v = static_cast<unsigned char>(data[i]) << 16;
        out.push_back(kB64[v >> 18 & 63]);
        out.push_back(kB64[v >> 12 & 63]);
        out += "==";
    } else if (i + 2 == data.size()) {
        const unsigned v = static_cast<unsigned char>(data[i]) << 16
            | static_cast<unsigned char>(data[i + 1]) << 8;
        out.push_back(kB64[v >> 18 & 63]);
        out.push_back(kB64[v >> 12 & 63]);
        out.push_back(kB64[v >> 6 & 63]);
        out += "=";
    }
    return out;
}

} // namespace reviewpulse
