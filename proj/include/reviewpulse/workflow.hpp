#pragma once

#include "reviewpulse/github.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace reviewpulse {

enum class Granularity { Pr, File, Hunk };

std::string_view to_string(Granularity g);
Granularity granularity_from_string(std::string_view text);

struct WatchedAction {
    std::string name; // full "owner/repo"
    Granularity granularity = Granularity::File;
};

// Watch-list file: one "owner/repo granularity" per line, '#' comments.
std::vector<WatchedAction> load_watch_list(const std::filesystem::path& file);

// The nine functional categories of optional configuration parameters.
enum class ConfigCategory {
    TaskTriggersModes,
    InputSettings,
    LlmServiceSettings,
    LlmSelection,
    LlmHyperparameters,
    PromptCustomization,
    PromptContextAugmentation,
    OutputSettings,
    Others,
};

std::string_view to_string(ConfigCategory category);
ConfigCategory config_category_from_string(std::string_view text);

// Parameter -> category mapping for one action; editable data, not code.
struct ActionSchema {
    std::map<std::string, ConfigCategory> categories;
};

// Schema file: "NAME = Category Name" per line, '#' comments.
ActionSchema load_action_schema(const std::filesystem::path& file);

// Loads config/actions/<owner>__<repo>.schema to match a watch-list entry.
ActionSchema load_action_schema_for(const std::filesystem::path& dir, const std::string& action);

struct ActionReference {
    std::string action;      // canonical watch-list name
    std::string version_ref; // text after '@', empty when unpinned
    std::string job_id;
    int step_index = 0;
    std::string path; // workflow file that referenced it
};

struct ScanResult {
    std::vector<ActionReference> references;
    std::vector<std::string> warnings; // unparseable files, reported not fatal
};

// One reference per uncommented `uses:` matching the watch list. Anchors,
// aliases, and multi-document files are resolved by the YAML parser, so
// commented-out lines never match.
ScanResult scan_workflows(const std::vector<WorkflowFile>& files,
    const std::vector<WatchedAction>& watch_list);

enum class TriggerMode { Auto, Manual };

std::string_view to_string(TriggerMode mode);

// Manual iff an `if` condition gates the referencing step, its job, or the
// workflow; `on:` filters (branches, paths) do not count.
TriggerMode derive_trigger_mode(const WorkflowFile& file, const ActionReference& ref);

struct ConfigSnapshot {
    std::map<std::string, std::string> parameters;
    std::map<std::string, ConfigCategory> category_of;
    std::set<std::string> unknown;
};

ConfigSnapshot categorize_params(const std::map<std::string, std::string>& params,
    const ActionSchema& schema);

// Parameters the referencing step supplies (`with:` inputs and `env:`),
// categorized through the schema.
ConfigSnapshot extract_config(const WorkflowFile& file, const ActionReference& ref,
    const ActionSchema& schema);

struct ConfigEvolution {
    int commit_count = 0;
    double span_days = 0.0;
    std::map<ConfigCategory, int> changed_categories; // multiset as counts
    bool trigger_changed = false;
    bool version_ref_changed = false;
};

// Compares the first and last snapshots of a time-ordered history.
ConfigEvolution config_evolution(const std::vector<WorkflowFile>& history,
    const std::vector<WatchedAction>& watch_list, const ActionSchema& schema);

// Value of the first LLM Selection parameter, when configured.
std::optional<std::string> llm_model_value(const ConfigSnapshot& snapshot);

} // namespace reviewpulse
