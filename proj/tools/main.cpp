#include "reviewpulse/report.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

using namespace reviewpulse;

namespace {

struct GlobalOptions {
    std::string config_path;
    std::string fixtures;
    bool record = false;
    bool replay = false;
    bool live = false;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::string out;
    std::vector<std::string> repos;
    std::string watchlist;
    std::string census;
    std::string golden;
    int runs = 0;
};

RunConfig resolve_config(const GlobalOptions& options)
{
    RunConfig config;
    if (!options.config_path.empty())
        config = load_config(options.config_path);
    if (!options.fixtures.empty())
        config.fixtures = options.fixtures;
    if (options.record)
        config.fixture_mode = FixtureMode::Record;
    if (options.replay)
        config.fixture_mode = FixtureMode::Replay;
    if (options.live)
        config.fixture_mode = FixtureMode::Live;
    if (options.seed_set)
        config.seed = options.seed;
    if (!options.out.empty())
        config.out = options.out;
    if (!options.repos.empty())
        config.repos = options.repos;
    if (!options.watchlist.empty())
        config.watch_list = options.watchlist;
    if (!options.census.empty())
        config.census = options.census;
    if (!options.golden.empty())
        config.golden_annotations = options.golden;
    if (options.runs > 0)
        config.runs = options.runs;
    config.validate();
    return config;
}

void print_adoption(const std::vector<AdoptionRow>& adoption)
{
    std::printf("%-40s %6s %6s %6s %8s %9s\n", "action", "total", "mature", "repos", "prs",
        "comments");
    for (const AdoptionRow& row : adoption)
        std::printf("%-40s %6lld %6lld %6lld %8lld %9lld\n", row.action.c_str(),
            static_cast<long long>(row.total_repos),
            static_cast<long long>(row.mature_repos),
            static_cast<long long>(row.active_repos),
            static_cast<long long>(row.active_prs),
            static_cast<long long>(row.comments));
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app { "reviewpulse: mining and analyzing AI code-review comments" };
    app.require_subcommand(1);

    GlobalOptions options;
    app.add_option("--config", options.config_path, "key/value config file");
    app.add_option("--fixtures", options.fixtures, "fixture store directory");
    app.add_flag("--record", options.record, "record live responses into the fixture store");
    app.add_flag("--replay", options.replay, "replay recorded fixtures, never touch the network");
    app.add_flag("--live", options.live, "live API access without recording");
    auto* seed_opt = app.add_option("--seed", options.seed, "seed for all randomized stages");
    app.add_option("--out", options.out, "output directory for artifacts");
    app.add_option("--repos", options.repos, "repositories (owner/name), comma separated")
        ->delimiter(',');
    app.add_option("--watchlist", options.watchlist, "watched-actions list file");
    app.add_option("--census", options.census, "adoption census JSONL for discover");
    app.add_option("--golden", options.golden, "golden annotations JSONL for evaluate");
    app.add_option("--runs", options.runs, "voting runs per stage");

    app.add_subcommand("discover", "summarize adoption per watched action");
    app.add_subcommand("collect", "acquire PRs, comments, and repository context");
    app.add_subcommand("filter", "apply the dataset-refinement filters");
    app.add_subcommand("reconstruct", "rebuild reviewed changes and subsequent deltas");
    app.add_subcommand("classify", "run the two-stage classification with voting");
    app.add_subcommand("evaluate", "score labels against golden annotations");
    app.add_subcommand("features", "extract the feature matrix and prune it");
    app.add_subcommand("explain", "train the forest and compute attributions");
    app.add_subcommand("report", "assemble and emit the report bundle");
    app.add_subcommand("pipeline", "run every stage end to end");

    CLI11_PARSE(app, argc, argv);
    options.seed_set = seed_opt->count() > 0;

    try {
        const RunConfig config = resolve_config(options);
        const std::string command = app.get_subcommands().front()->get_name();
        if (command == "discover")
            print_adoption(cmd_discover(config));
        else if (command == "collect")
            cmd_collect(config);
        else if (command == "filter")
            cmd_filter(config);
        else if (command == "reconstruct")
            cmd_reconstruct(config);
        else if (command == "classify")
            cmd_classify(config);
        else if (command == "evaluate")
            cmd_evaluate(config);
        else if (command == "features")
            cmd_features(config);
        else if (command == "explain")
            cmd_explain(config);
        else if (command == "report")
            cmd_report(config);
        else if (command == "pipeline") {
            cmd_pipeline(config);
            std::printf("pipeline complete; report at %s\n",
                (config.out / "report.md").c_str());
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
