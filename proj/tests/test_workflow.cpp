#include <doctest.h>

#include "reviewpulse/errors.hpp"
#include "reviewpulse/workflow.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

using namespace reviewpulse;

namespace {

std::filesystem::path data_dir()
{
    return std::filesystem::path(TEST_DATA_DIR) / "workflows";
}

std::filesystem::path config_dir()
{
    return std::filesystem::path(CONFIG_DIR) / "actions";
}

WorkflowFile load_workflow(const std::string& name)
{
    std::ifstream in(data_dir() / name);
    REQUIRE(in);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return { name, buffer.str(), "abc123", 1700000000 };
}

nlohmann::json expectations()
{
    std::ifstream in(data_dir() / "expectations.json");
    REQUIRE(in);
    nlohmann::json j;
    in >> j;
    return j["files"];
}

} // namespace

TEST_CASE("workflow corpus matches the hand-audited expectations")
{
    const std::vector<WatchedAction> watch_list = load_watch_list(config_dir()
        / "watchlist.txt");
    const nlohmann::json expected = expectations();

    for (const auto& [file_name, expect] : expected.items()) {
        CAPTURE(file_name);
        const WorkflowFile file = load_workflow(file_name);
        const ScanResult scan = scan_workflows({ file }, watch_list);

        const auto& expected_refs = expect.at("references");
        REQUIRE(scan.references.size() == expected_refs.size());
        for (std::size_t i = 0; i < scan.references.size(); ++i) {
            const ActionReference& ref = scan.references[i];
            const auto& want = expected_refs[i];
            CHECK(ref.action == want.at("action").get<std::string>());
            CHECK(ref.version_ref == want.at("version_ref").get<std::string>());
            CHECK(ref.job_id == want.at("job_id").get<std::string>());
            CHECK(ref.step_index == want.at("step_index").get<int>());
        }
        if (expect.contains("parse_warning"))
            CHECK(!scan.warnings.empty() == expect["parse_warning"].get<bool>());

        if (expect.contains("trigger")) {
            const TriggerMode mode = derive_trigger_mode(file, scan.references.front());
            CHECK(std::string(to_string(mode)) == expect["trigger"].get<std::string>());
        }

        if (expect.contains("categories")) {
            const ActionSchema schema = load_action_schema_for(config_dir(),
                scan.references.front().action);
            const ConfigSnapshot snapshot = extract_config(file, scan.references.front(),
                schema);
            std::map<std::string, int> tally;
            for (const auto& [name, category] : snapshot.category_of)
                ++tally[std::string(to_string(category))];
            std::map<std::string, int> want;
            for (const auto& [category, count] : expect["categories"].items())
                want[category] = count.get<int>();
            CHECK(tally == want);
            std::set<std::string> unknown_want;
            for (const auto& name : expect["unknown"])
                unknown_want.insert(name.get<std::string>());
            CHECK(snapshot.unknown == unknown_want);
            // category partition: every parameter categorized or unknown
            CHECK(snapshot.parameters.size()
                == snapshot.category_of.size() + snapshot.unknown.size());
        }
    }
}

TEST_CASE("commenting out a uses line removes exactly that reference")
{
    const std::vector<WatchedAction> watch_list = load_watch_list(config_dir()
        / "watchlist.txt");
    const WorkflowFile original = load_workflow("wf01_basic_auto.yml");
    const ScanResult before = scan_workflows({ original }, watch_list);
    REQUIRE(before.references.size() == 1);

    WorkflowFile commented = original;
    const std::string needle = "- uses: anc95/ChatGPT-CodeReview@main";
    const std::size_t pos = commented.content.find(needle);
    REQUIRE(pos != std::string::npos);
    commented.content.replace(pos, 1, "#");
    const ScanResult after = scan_workflows({ commented }, watch_list);
    CHECK(after.references.empty());
}

TEST_CASE("config evolution detects category, trigger, and version changes")
{
    const std::vector<WatchedAction> watch_list = load_watch_list(config_dir()
        / "watchlist.txt");
    const ActionSchema schema = load_action_schema_for(config_dir(),
        "anc95/ChatGPT-CodeReview");

    WorkflowFile first = load_workflow("wf01_basic_auto.yml"); // MODEL gpt-3.5, @main
    first.committed_at = 1700000000;
    WorkflowFile last = load_workflow("wf11_version_tag.yml"); // MODEL gpt-4, @v1.2.0
    last.committed_at = 1700000000 + 86400 * 3;

    const ConfigEvolution evolution = config_evolution({ first, last }, watch_list, schema);
    CHECK(evolution.commit_count == 2);
    CHECK(evolution.span_days == doctest::Approx(3.0));
    CHECK(evolution.version_ref_changed);
    CHECK(evolution.changed_categories.count(ConfigCategory::LlmSelection));
    CHECK(evolution.trigger_changed); // `on` filters differ between the files
}

TEST_CASE("single-commit history has no changes")
{
    const std::vector<WatchedAction> watch_list = load_watch_list(config_dir()
        / "watchlist.txt");
    const ActionSchema schema = load_action_schema_for(config_dir(),
        "anc95/ChatGPT-CodeReview");
    const WorkflowFile only = load_workflow("wf01_basic_auto.yml");
    const ConfigEvolution evolution = config_evolution({ only }, watch_list, schema);
    CHECK(evolution.commit_count == 1);
    CHECK(evolution.span_days == 0.0);
    CHECK(evolution.changed_categories.empty());
    CHECK(!evolution.trigger_changed);
    CHECK(!evolution.version_ref_changed);
}

TEST_CASE("appending an identical snapshot adds no changes")
{
    const std::vector<WatchedAction> watch_list = load_watch_list(config_dir()
        / "watchlist.txt");
    const ActionSchema schema = load_action_schema_for(config_dir(),
        "anc95/ChatGPT-CodeReview");
    WorkflowFile first = load_workflow("wf01_basic_auto.yml");
    WorkflowFile same = first;
    same.committed_at += 86400;
    const ConfigEvolution evolution = config_evolution({ first, same }, watch_list, schema);
    CHECK(evolution.changed_categories.empty());
    CHECK(!evolution.trigger_changed);
    CHECK(!evolution.version_ref_changed);
}

TEST_CASE("categorize_params handles empty and unknown names")
{
    const ActionSchema schema = load_action_schema_for(config_dir(),
        "anc95/ChatGPT-CodeReview");
    const ConfigSnapshot empty = categorize_params({}, schema);
    CHECK(empty.parameters.empty());
    CHECK(empty.unknown.empty());

    const ConfigSnapshot unknown = categorize_params({ { "FOO", "1" } }, ActionSchema {});
    CHECK(unknown.unknown == std::set<std::string> { "FOO" });

    const ConfigSnapshot model = categorize_params({ { "MODEL", "gpt-4" } }, schema);
    CHECK(model.category_of.at("MODEL") == ConfigCategory::LlmSelection);
    CHECK(llm_model_value(model) == std::optional<std::string>("gpt-4"));
}

TEST_CASE("watch list loads all sixteen actions")
{
    const std::vector<WatchedAction> watch_list = load_watch_list(config_dir()
        / "watchlist.txt");
    CHECK(watch_list.size() == 16);
    CHECK(watch_list.front().name == "anc95/ChatGPT-CodeReview");
    CHECK(watch_list.front().granularity == Granularity::File);
    int hunk = 0, file = 0, pr = 0;
    for (const WatchedAction& action : watch_list) {
        hunk += action.granularity == Granularity::Hunk;
        file += action.granularity == Granularity::File;
        pr += action.granularity == Granularity::Pr;
    }
    CHECK(hunk == 6);
    CHECK(file == 4);
    CHECK(pr == 6);
}
