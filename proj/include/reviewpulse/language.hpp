#pragma once

#include <functional>
#include <string>
#include <string_view>

namespace reviewpulse {

struct LanguageTag {
    enum class Value { English, Other };
    Value value = Value::Other;
    double confidence = 0.0; // in [0, 1]

    bool english() const { return value == Value::English; }
};

using LanguageDetector = std::function<LanguageTag(std::string_view)>;

// Built-in heuristic: Latin-script ratio plus English stopword hit rate with
// a 0.15 threshold. Deterministic; no external model.
LanguageTag detect_language(std::string_view text);

// Process-boundary hook: runs `command` with the text on stdin and expects
// one line "english <confidence>" or "other <confidence>" on stdout.
LanguageDetector external_detector(std::string command);

} // namespace reviewpulse
