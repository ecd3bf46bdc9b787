#include "reviewpulse/language.hpp"

#include "reviewpulse/errors.hpp"
#include "reviewpulse/text_util.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>

namespace reviewpulse {

namespace {

    constexpr double kStopwordThreshold = 0.15;

    bool is_latin_letter(char32_t cp)
    {
        return (cp >= 'A' && cp <= 'Z') || (cp >= 'a' && cp <= 'z')
            || (cp >= 0x00C0 && cp <= 0x024F); // Latin-1 supplement + extended
    }

    bool is_nonlatin_letter(char32_t cp)
    {
        return (cp >= 0x0370 && cp <= 0x03FF)    // Greek
            || (cp >= 0x0400 && cp <= 0x04FF)    // Cyrillic
            || (cp >= 0x0590 && cp <= 0x05FF)    // Hebrew
            || (cp >= 0x0600 && cp <= 0x06FF)    // Arabic
            || (cp >= 0x0900 && cp <= 0x097F)    // Devanagari
            || (cp >= 0x0E00 && cp <= 0x0E7F)    // Thai
            || (cp >= 0x1100 && cp <= 0x11FF)    // Hangul jamo
            || (cp >= 0x3040 && cp <= 0x30FF)    // Hiragana + Katakana
            || (cp >= 0x3130 && cp <= 0x318F)    // Hangul compatibility
            || (cp >= 0x3400 && cp <= 0x4DBF)    // CJK extension A
            || (cp >= 0x4E00 && cp <= 0x9FFF)    // CJK unified
            || (cp >= 0xAC00 && cp <= 0xD7AF);   // Hangul syllables
    }

} // namespace

LanguageTag detect_language(std::string_view text)
{
    if (trim(text).empty())
        return { LanguageTag::Value::Other, 0.0 };

    // code blocks say nothing about the prose language
    const std::string prose = strip_fenced_blocks(text);
    const std::vector<char32_t> codepoints = decode_utf8(prose);

    std::size_t latin = 0, nonlatin = 0;
    for (const char32_t cp : codepoints) {
        if (is_latin_letter(cp))
            ++latin;
        else if (is_nonlatin_letter(cp))
            ++nonlatin;
    }
    const std::size_t letters = latin + nonlatin;
    if (letters == 0)
        return { LanguageTag::Value::Other, 0.0 };
    const double latin_ratio = static_cast<double>(latin) / static_cast<double>(letters);
    if (latin_ratio < 0.5)
        return { LanguageTag::Value::Other, 1.0 - latin_ratio };

    // stopword hit rate over lowercase word tokens
    const std::string lowered = to_lower_ascii(prose);
    std::size_t tokens = 0, hits = 0;
    std::string current;
    const auto& stopwords = english_stopwords();
    auto flush = [&]() {
        if (current.empty())
            return;
        ++tokens;
        if (std::binary_search(stopwords.begin(), stopwords.end(), current))
            ++hits;
        current.clear();
    };
    for (const char c : lowered) {
        if (c >= 'a' && c <= 'z')
            current.push_back(c);
        else
            flush();
    }
    flush();
    if (tokens == 0)
        return { LanguageTag::Value::Other, 0.0 };
    const double hit_rate = static_cast<double>(hits) / static_cast<double>(tokens);
    if (hit_rate >= kStopwordThreshold)
        return { LanguageTag::Value::English, std::min(1.0, hit_rate * latin_ratio / kStopwordThreshold) };
    return { LanguageTag::Value::Other, 1.0 - hit_rate };
}

LanguageDetector external_detector(std::string command)
{
    return [command](std::string_view text) -> LanguageTag {
        FILE* pipe = popen((command + " > /tmp/reviewpulse_lang.out").c_str(), "w");
        if (!pipe)
            throw Error("cannot spawn language detector: " + command);
        fwrite(text.data(), 1, text.size(), pipe);
        pclose(pipe);
        FILE* out = fopen("/tmp/reviewpulse_lang.out", "r");
        if (!out)
            throw Error("language detector produced no output");
        char label[32] = { 0 };
        double confidence = 0.0;
        const int fields = fscanf(out, "%31s %lf", label, &confidence);
        fclose(out);
        if (fields < 1)
            throw Error("language detector output unreadable");
        LanguageTag tag;
        tag.value = std::string_view(label) == "english" ? LanguageTag::Value::English
                                                         : LanguageTag::Value::Other;
        tag.confidence = std::clamp(confidence, 0.0, 1.0);
        return tag;
    };
}

} // namespace reviewpulse
