#include "reviewpulse/workflow.hpp"

#include "reviewpulse/errors.hpp"
#include "reviewpulse/text_util.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <fstream>

namespace reviewpulse {

std::string_view to_string(Granularity g)
{
    switch (g) {
    case Granularity::Pr:
        return "pr";
    case Granularity::File:
        return "file";
    case Granularity::Hunk:
        return "hunk";
    }
    return "file";
}

Granularity granularity_from_string(std::string_view text)
{
    if (text == "pr")
        return Granularity::Pr;
    if (text == "file")
        return Granularity::File;
    if (text == "hunk")
        return Granularity::Hunk;
    throw Error("unknown granularity: " + std::string(text));
}

std::vector<WatchedAction> load_watch_list(const std::filesystem::path& file)
{
    std::ifstream in(file);
    if (!in)
        throw Error("cannot read watch list: " + file.string());
    std::vector<WatchedAction> actions;
    std::string line;
    while (std::getline(in, line)) {
        const std::string_view t = trim(line);
        if (t.empty() || t.front() == '#')
            continue;
        const std::size_t space = t.find_first_of(" \t");
        WatchedAction action;
        if (space == std::string_view::npos) {
            action.name = std::string(t);
        } else {
            action.name = std::string(t.substr(0, space));
            action.granularity = granularity_from_string(trim(t.substr(space)));
        }
        actions.push_back(std::move(action));
    }
    return actions;
}

std::string_view to_string(ConfigCategory category)
{
    switch (category) {
    case ConfigCategory::TaskTriggersModes:
        return "Task Triggers & Modes";
    case ConfigCategory::InputSettings:
        return "Input Settings";
    case ConfigCategory::LlmServiceSettings:
        return "LLM Service Settings";
    case ConfigCategory::LlmSelection:
        return "LLM Selection";
    case ConfigCategory::LlmHyperparameters:
        return "LLM Hyperparameters";
    case ConfigCategory::PromptCustomization:
        return "Prompt Customization";
    case ConfigCategory::PromptContextAugmentation:
        return "Prompt Context Augmentation";
    case ConfigCategory::OutputSettings:
        return "Output Settings";
    case ConfigCategory::Others:
        return "Others";
    }
    return "Others";
}

ConfigCategory config_category_from_string(std::string_view text)
{
    static const std::pair<std::string_view, ConfigCategory> table[] = {
        { "Task Triggers & Modes", ConfigCategory::TaskTriggersModes },
        { "Input Settings", ConfigCategory::InputSettings },
        { "LLM Service Settings", ConfigCategory::LlmServiceSettings },
        { "LLM Selection", ConfigCategory::LlmSelection },
        { "LLM Hyperparameters", ConfigCategory::LlmHyperparameters },
        { "Prompt Customization", ConfigCategory::PromptCustomization },
        { "Prompt Context Augmentation", ConfigCategory::PromptContextAugmentation },
        { "Output Settings", ConfigCategory::OutputSettings },
        { "Others", ConfigCategory::Others },
    };
    for (const auto& [name, category] : table)
        if (name == text)
            return category;
    throw Error("unknown configuration category: " + std::string(text));
}

ActionSchema load_action_schema(const std::filesystem::path& file)
{
    std::ifstream in(file);
    if (!in)
        throw Error("cannot read action schema: " + file.string());
    ActionSchema schema;
    std::string line;
    while (std::getline(in, line)) {
        const std::string_view t = trim(line);
        if (t.empty() || t.front() == '#')
            continue;
        const std::size_t eq = t.find('=');
        if (eq == std::string_view::npos)
            throw Error("malformed schema line in " + file.string() + ": " + std::string(t));
        const std::string name(trim(t.substr(0, eq)));
        schema.categories[name] = config_category_from_string(trim(t.substr(eq + 1)));
    }
    return schema;
}

ActionSchema load_action_schema_for(const std::filesystem::path& dir, const std::string& action)
{
    std::string file_name = action;
    std::replace(file_name.begin(), file_name.end(), '/', '_');
    const std::filesystem::path file = dir / (file_name + ".schema");
    if (!std::filesystem::exists(file))
        return {};
    return load_action_schema(file);
}

namespace {

    // action name before any '@' and trimmed to owner/repo
    std::string action_of_uses(std::string_view uses)
    {
        const std::size_t at = uses.find('@');
        std::string_view name = at == std::string_view::npos ? uses : uses.substr(0, at);
        // subdirectory references keep only owner/repo
        std::size_t first = name.find('/');
        if (first == std::string_view::npos)
            return std::string(name);
        const std::size_t second = name.find('/', first + 1);
        if (second != std::string_view::npos)
            name = name.substr(0, second);
        return std::string(name);
    }

    std::string version_of_uses(std::string_view uses)
    {
        const std::size_t at = uses.find('@');
        return at == std::string_view::npos ? "" : std::string(uses.substr(at + 1));
    }

    const WatchedAction* find_watched(const std::vector<WatchedAction>& watch_list,
        const std::string& action)
    {
        for (const WatchedAction& watched : watch_list)
            if (to_lower_ascii(watched.name) == to_lower_ascii(action))
                return &watched;
        return nullptr;
    }

    template <typename Fn>
    void for_each_step(const YAML::Node& doc, Fn&& fn)
    {
        if (!doc.IsMap())
            return;
        const YAML::Node jobs = doc["jobs"];
        if (!jobs || !jobs.IsMap())
            return;
        for (const auto& job : jobs) {
            const std::string job_id = job.first.as<std::string>();
            const YAML::Node steps = job.second["steps"];
            if (!steps || !steps.IsSequence())
                continue;
            int index = 0;
            for (const auto& step : steps) {
                fn(job_id, index, doc, job.second, step);
                ++index;
            }
        }
    }

    std::vector<YAML::Node> parse_documents(const WorkflowFile& file)
    {
        return YAML::LoadAll(file.content);
    }

} // namespace

ScanResult scan_workflows(const std::vector<WorkflowFile>& files,
    const std::vector<WatchedAction>& watch_list)
{
    ScanResult result;
    for (const WorkflowFile& file : files) {
        std::vector<YAML::Node> docs;
        try {
            docs = parse_documents(file);
        } catch (const YAML::Exception& e) {
            result.warnings.push_back("skipping unparseable " + file.path + ": " + e.what());
            continue;
        }
        for (const YAML::Node& doc : docs) {
            for_each_step(doc, [&](const std::string& job_id, int index, const YAML::Node&,
                                   const YAML::Node&, const YAML::Node& step) {
                if (!step.IsMap() || !step["uses"])
                    return;
                const std::string uses = step["uses"].as<std::string>("");
                const WatchedAction* watched = find_watched(watch_list, action_of_uses(uses));
                if (!watched)
                    return;
                result.references.push_back({ watched->name, version_of_uses(uses), job_id,
                    index, file.path });
            });
        }
    }
    return result;
}

std::string_view to_string(TriggerMode mode)
{
    return mode == TriggerMode::Auto ? "auto" : "manual";
}

namespace {

    bool has_if(const YAML::Node& node)
    {
        if (!node || !node.IsMap())
            return false;
        const YAML::Node condition = node["if"];
        return condition && condition.IsScalar() && !condition.as<std::string>("").empty();
    }

} // namespace

TriggerMode derive_trigger_mode(const WorkflowFile& file, const ActionReference& ref)
{
    std::vector<YAML::Node> docs;
    try {
        docs = parse_documents(file);
    } catch (const YAML::Exception&) {
        return TriggerMode::Auto;
    }
    TriggerMode mode = TriggerMode::Auto;
    for (const YAML::Node& doc : docs) {
        for_each_step(doc, [&](const std::string& job_id, int index, const YAML::Node& workflow,
                               const YAML::Node& job, const YAML::Node& step) {
            if (job_id != ref.job_id || index != ref.step_index)
                return;
            if (!step.IsMap() || !step["uses"])
                return;
            if (action_of_uses(step["uses"].as<std::string>("")) != ref.action
                && to_lower_ascii(action_of_uses(step["uses"].as<std::string>("")))
                    != to_lower_ascii(ref.action))
                return;
            if (has_if(step) || has_if(job) || has_if(workflow))
                mode = TriggerMode::Manual;
        });
    }
    return mode;
}

ConfigSnapshot categorize_params(const std::map<std::string, std::string>& params,
    const ActionSchema& schema)
{
    ConfigSnapshot snapshot;
    snapshot.parameters = params;
    for (const auto& [name, value] : params) {
        const auto it = schema.categories.find(name);
        if (it != schema.categories.end())
            snapshot.category_of[name] = it->second;
        else
            snapshot.unknown.insert(name);
    }
    return snapshot;
}

namespace {

    std::map<std::string, std::string> step_params(const YAML::Node& step)
    {
        std::map<std::string, std::string> params;
        for (const char* section : { "with", "env" }) {
            const YAML::Node node = step[section];
            if (!node || !node.IsMap())
                continue;
            for (const auto& entry : node) {
                std::string value;
                try {
                    value = entry.second.as<std::string>();
                } catch (const YAML::Exception&) {
                    YAML::Emitter emitter;
                    emitter << entry.second;
                    value = emitter.c_str();
                }
                params[entry.first.as<std::string>()] = value;
            }
        }
        return params;
    }

    YAML::Node emit_on(const YAML::Node& doc)
    {
        return doc.IsMap() ? doc["on"] : YAML::Node();
    }

    std::string node_text(const YAML::Node& node)
    {
        if (!node)
            return "";
        YAML::Emitter emitter;
        emitter << node;
        return emitter.c_str();
    }

} // namespace

ConfigSnapshot extract_config(const WorkflowFile& file, const ActionReference& ref,
    const ActionSchema& schema)
{
    std::map<std::string, std::string> params;
    std::vector<YAML::Node> docs;
    try {
        docs = parse_documents(file);
    } catch (const YAML::Exception&) {
        return categorize_params(params, schema);
    }
    for (const YAML::Node& doc : docs) {
        for_each_step(doc, [&](const std::string& job_id, int index, const YAML::Node&,
                               const YAML::Node&, const YAML::Node& step) {
            if (job_id != ref.job_id || index != ref.step_index)
                return;
            params = step_params(step);
        });
    }
    return categorize_params(params, schema);
}

ConfigEvolution config_evolution(const std::vector<WorkflowFile>& history,
    const std::vector<WatchedAction>& watch_list, const ActionSchema& schema)
{
    if (history.empty())
        throw Error("config_evolution: empty history");
    ConfigEvolution evolution;
    evolution.commit_count = static_cast<int>(history.size());
    evolution.span_days = static_cast<double>(history.back().committed_at
                              - history.front().committed_at)
        / 86400.0;
    if (history.size() == 1)
        return evolution;

    const WorkflowFile& first = history.front();
    const WorkflowFile& last = history.back();
    const ScanResult first_scan = scan_workflows({ first }, watch_list);
    const ScanResult last_scan = scan_workflows({ last }, watch_list);
    if (first_scan.references.empty() || last_scan.references.empty())
        return evolution;
    const ActionReference& first_ref = first_scan.references.front();
    const ActionReference& last_ref = last_scan.references.front();

    evolution.version_ref_changed = first_ref.version_ref != last_ref.version_ref;

    const ConfigSnapshot a = extract_config(first, first_ref, schema);
    const ConfigSnapshot b = extract_config(last, last_ref, schema);
    auto category_of = [&](const std::string& name) {
        const auto it = schema.categories.find(name);
        return it != schema.categories.end() ? it->second : ConfigCategory::Others;
    };
    for (const auto& [name, value] : a.parameters) {
        const auto it = b.parameters.find(name);
        if (it == b.parameters.end() || it->second != value)
            ++evolution.changed_categories[category_of(name)];
    }
    for (const auto& [name, value] : b.parameters)
        if (!a.parameters.count(name))
            ++evolution.changed_categories[category_of(name)];

    // trigger changes cover both the `on` block and gating `if` conditions
    auto trigger_fingerprint = [&](const WorkflowFile& file, const ActionReference& ref) {
        std::string print;
        std::vector<YAML::Node> docs;
        try {
            docs = parse_documents(file);
        } catch (const YAML::Exception&) {
            return print;
        }
        for (const YAML::Node& doc : docs) {
            print += node_text(emit_on(doc));
            for_each_step(doc, [&](const std::string& job_id, int index, const YAML::Node& wf,
                                   const YAML::Node& job, const YAML::Node& step) {
                if (job_id != ref.job_id || index != ref.step_index)
                    return;
                print += "|" + node_text(wf.IsMap() ? wf["if"] : YAML::Node());
                print += "|" + node_text(job.IsMap() ? job["if"] : YAML::Node());
                print += "|" + node_text(step.IsMap() ? step["if"] : YAML::Node());
            });
        }
        return print;
    };
    evolution.trigger_changed = trigger_fingerprint(first, first_ref)
        != trigger_fingerprint(last, last_ref);
    return evolution;
}

std::optional<std::string> llm_model_value(const ConfigSnapshot& snapshot)
{
    for (const auto& [name, category] : snapshot.category_of)
        if (category == ConfigCategory::LlmSelection)
            return snapshot.parameters.at(name);
    return std::nullopt;
}

} // namespace reviewpulse
