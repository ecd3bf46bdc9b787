#pragma once

#include "reviewpulse/labels.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace reviewpulse {

struct BackendSpec {
    std::string name;     // "mock" or "http"
    std::string endpoint; // host for http backends
    std::string model;
    double temperature = 0.0; // pinned to 0 for evaluation parity
    int max_runs = 5;
    std::string script_path; // mock backends: scripted responses

    void validate() const;
};

// One LLM call: the full response text for a prompt. run_index lets scripted
// backends vary across voting runs.
class Backend {
public:
    virtual ~Backend() = default;
    virtual std::string complete(const std::string& prompt, std::int64_t comment_id,
        int run_index)
        = 0;
    virtual std::int64_t call_count() const = 0;
};

// Extracted payload of one classification response.
struct ParsedPayload {
    std::string label;
    std::vector<std::string> items;
};

// First machine-readable payload block in the response: a fenced ```json
// block or the first brace-balanced JSON object carrying a "label" key.
// Throws BackendFormatError when absent.
ParsedPayload parse_llm_payload(const std::string& text);

// Deterministic scripted backend keyed by comment id; a first-class backend
// for offline runs. Script file format:
//   {"stage": {"<comment_id>": ["response text", ...], "default": [...]}}
// Responses cycle when a run index passes the end of the list.
class MockBackend : public Backend {
public:
    MockBackend(std::map<std::int64_t, std::vector<std::string>> responses,
        std::vector<std::string> fallback = {});

    static std::shared_ptr<MockBackend> from_script(const std::filesystem::path& file,
        const std::string& stage);

    std::string complete(const std::string& prompt, std::int64_t comment_id,
        int run_index) override;
    std::int64_t call_count() const override { return calls_; }

private:
    std::map<std::int64_t, std::vector<std::string>> responses_;
    std::vector<std::string> fallback_;
    std::int64_t calls_ = 0;
};

class Session;

// POSTs {model, temperature, prompt} to the configured endpoint and returns
// the response body (or its content field when the body is JSON).
class HttpBackend : public Backend {
public:
    HttpBackend(BackendSpec spec, std::shared_ptr<Session> session);

    std::string complete(const std::string& prompt, std::int64_t comment_id,
        int run_index) override;
    std::int64_t call_count() const override { return calls_; }

private:
    BackendSpec spec_;
    std::shared_ptr<Session> session_;
    std::int64_t calls_ = 0;
};

std::shared_ptr<Backend> make_backend(const BackendSpec& spec, std::shared_ptr<Session> session);

// Template with {comment}, {reviewed_diff}, {subsequent_diff}, {items}
// placeholders.
struct PromptTemplate {
    std::string text;

    static PromptTemplate from_file(const std::filesystem::path& file);
    std::string render(const std::map<std::string, std::string>& values) const;
};

// Editable default templates reproducing the two-stage content requirements.
PromptTemplate default_stage1_template();
PromptTemplate default_stage2_template();

} // namespace reviewpulse
