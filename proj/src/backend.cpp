#include "reviewpulse/backend.hpp"

#include "reviewpulse/errors.hpp"
#include "reviewpulse/session.hpp"
#include "reviewpulse/text_util.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace reviewpulse {

void BackendSpec::validate() const
{
    if (temperature != 0.0)
        throw Error("backend temperature is pinned to 0 for evaluation parity");
    if (max_runs < 1)
        throw Error("backend max_runs must be positive");
    if (name != "mock" && name != "http")
        throw Error("unknown backend kind: " + name);
    if (name == "mock" && script_path.empty())
        throw Error("mock backend requires a script path");
    if (name == "http" && (endpoint.empty() || model.empty()))
        throw Error("http backend requires endpoint and model");
}

namespace {

    std::optional<std::string> first_json_object(const std::string& text)
    {
        // prefer a fenced json block
        const std::size_t fence = text.find("```");
        if (fence != std::string::npos) {
            std::size_t start = text.find('\n', fence);
            const std::size_t end = start == std::string::npos
                ? std::string::npos
                : text.find("```", start);
            if (start != std::string::npos && end != std::string::npos) {
                const std::string inner = text.substr(start + 1, end - start - 1);
                if (inner.find('{') != std::string::npos)
                    return inner;
            }
        }
        // otherwise the first brace-balanced object
        const std::size_t open = text.find('{');
        if (open == std::string::npos)
            return std::nullopt;
        int depth = 0;
        bool in_string = false;
        for (std::size_t i = open; i < text.size(); ++i) {
            const char c = text[i];
            if (in_string) {
                if (c == '\\')
                    ++i;
                else if (c == '"')
                    in_string = false;
                continue;
            }
            if (c == '"')
                in_string = true;
            else if (c == '{')
                ++depth;
            else if (c == '}') {
                --depth;
                if (depth == 0)
                    return text.substr(open, i - open + 1);
            }
        }
        return std::nullopt;
    }

} // namespace

ParsedPayload parse_llm_payload(const std::string& text)
{
    const std::optional<std::string> block = first_json_object(text);
    if (!block)
        throw BackendFormatError("response carries no payload block");
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(*block);
    } catch (const nlohmann::json::exception& e) {
        throw BackendFormatError(std::string("payload is not valid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("label") || !j["label"].is_string())
        throw BackendFormatError("payload lacks a label field");
    ParsedPayload payload;
    payload.label = j["label"].get<std::string>();
    if (j.contains("items")) {
        if (!j["items"].is_array())
            throw BackendFormatError("payload items must be a list");
        for (const auto& item : j["items"]) {
            const std::string trimmed(trim(item.get<std::string>()));
            if (!trimmed.empty())
                payload.items.push_back(trimmed);
        }
    }
    return payload;
}

MockBackend::MockBackend(std::map<std::int64_t, std::vector<std::string>> responses,
    std::vector<std::string> fallback)
    : responses_(std::move(responses))
    , fallback_(std::move(fallback))
{
}

std::shared_ptr<MockBackend> MockBackend::from_script(const std::filesystem::path& file,
    const std::string& stage)
{
    std::ifstream in(file);
    if (!in)
        throw Error("cannot read backend script: " + file.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw Error("backend script is not valid JSON: " + std::string(e.what()));
    }
    if (!j.contains(stage))
        throw Error("backend script lacks stage " + stage);
    std::map<std::int64_t, std::vector<std::string>> responses;
    std::vector<std::string> fallback;
    for (const auto& [key, value] : j[stage].items()) {
        std::vector<std::string> list;
        for (const auto& entry : value)
            list.push_back(entry.is_string() ? entry.get<std::string>() : entry.dump());
        if (key == "default")
            fallback = std::move(list);
        else
            responses[std::stoll(key)] = std::move(list);
    }
    return std::make_shared<MockBackend>(std::move(responses), std::move(fallback));
}

std::string MockBackend::complete(const std::string&, std::int64_t comment_id, int run_index)
{
    ++calls_;
    const auto it = responses_.find(comment_id);
    const std::vector<std::string>& list = it != responses_.end() ? it->second : fallback_;
    if (list.empty())
        throw BackendUnavailable("mock backend has no script for comment "
            + std::to_string(comment_id));
    return list[static_cast<std::size_t>(run_index) % list.size()];
}

HttpBackend::HttpBackend(BackendSpec spec, std::shared_ptr<Session> session)
    : spec_(std::move(spec))
    , session_(std::move(session))
{
    if (!session_)
        throw Error("http backend requires a session");
}

std::string HttpBackend::complete(const std::string& prompt, std::int64_t comment_id,
    int run_index)
{
    ++calls_;
    HttpRequest request;
    request.method = "POST";
    request.host = spec_.endpoint;
    request.path = "/v1/completions";
    // the run index keys distinct fixture entries for voting runs
    request.query = { { "run", std::to_string(run_index) },
        { "comment", std::to_string(comment_id) } };
    request.body = nlohmann::json {
        { "model", spec_.model },
        { "temperature", spec_.temperature },
        { "prompt", prompt },
    }.dump();
    HttpResponse response;
    try {
        response = session_->request(request);
    } catch (const FixtureMiss&) {
        throw;
    } catch (const Error& e) {
        throw BackendUnavailable(std::string("backend transport failed: ") + e.what());
    }
    if (response.status != 200)
        throw BackendUnavailable("backend returned status " + std::to_string(response.status));
    // accept either raw text or a JSON body with a content/text field
    try {
        const nlohmann::json j = nlohmann::json::parse(response.body);
        if (j.is_object()) {
            if (j.contains("content") && j["content"].is_string())
                return j["content"].get<std::string>();
            if (j.contains("choices") && j["choices"].is_array() && !j["choices"].empty()) {
                const auto& first = j["choices"][0];
                if (first.contains("text"))
                    return first["text"].get<std::string>();
                if (first.contains("message") && first["message"].contains("content"))
                    return first["message"]["content"].get<std::string>();
            }
        }
    } catch (const nlohmann::json::exception&) {
        // raw text body
    }
    return response.body;
}

std::shared_ptr<Backend> make_backend(const BackendSpec& spec, std::shared_ptr<Session> session)
{
    spec.validate();
    if (spec.name == "mock")
        return MockBackend::from_script(spec.script_path, spec.model.empty() ? "stage1"
                                                                             : spec.model);
    return std::make_shared<HttpBackend>(spec, std::move(session));
}

PromptTemplate PromptTemplate::from_file(const std::filesystem::path& file)
{
    std::ifstream in(file);
    if (!in)
        throw Error("cannot read prompt template: " + file.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return { buffer.str() };
}

std::string PromptTemplate::render(const std::map<std::string, std::string>& values) const
{
    std::string out = text;
    for (const auto& [name, value] : values) {
        const std::string placeholder = "{" + name + "}";
        std::size_t pos = 0;
        while ((pos = out.find(placeholder, pos)) != std::string::npos) {
            out.replace(pos, placeholder.size(), value);
            pos += value.size();
        }
    }
    return out;
}

PromptTemplate default_stage1_template()
{
    return { "You are reviewing one pull-request review comment.\n"
             "Decide whether it contains specific, actionable issues or suggestions.\n"
             "\n"
             "Review comment:\n{comment}\n"
             "\n"
             "Code under review:\n{reviewed_diff}\n"
             "\n"
             "Classify as exactly one of: None (no issues/suggestions), General (only "
             "overly general advice), Valid (at least one specific, actionable item).\n"
             "For Valid comments list each issue or suggestion.\n"
             "Respond only with a JSON payload: "
             "{\"label\": \"None|General|Valid\", \"items\": [\"...\"]}\n" };
}

PromptTemplate default_stage2_template()
{
    return { "A review comment was judged Valid with these issues/suggestions:\n{items}\n"
             "\n"
             "Code under review at comment time:\n{reviewed_diff}\n"
             "\n"
             "Subsequent changes to the file before merge:\n{subsequent_diff}\n"
             "\n"
             "Decide how far the items were addressed. Classify as exactly one of: "
             "Valid-Uncertain (insufficient information, e.g. file deleted or rewritten), "
             "Valid-Unaddressed (none addressed), Valid-Partially (some but not all "
             "addressed), Valid-Fully (all addressed).\n"
             "Respond only with a JSON payload: {\"label\": \"Valid-...\"}\n" };
}

} // namespace reviewpulse
