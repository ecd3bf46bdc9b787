#pragma once

#include "reviewpulse/backend.hpp"
#include "reviewpulse/filters.hpp"
#include "reviewpulse/metrics.hpp"
#include "reviewpulse/reconstruct.hpp"
#include "reviewpulse/session.hpp"
#include "reviewpulse/shap.hpp"
#include "reviewpulse/stats.hpp"
#include "reviewpulse/workflow.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace reviewpulse {

struct RunConfig {
    std::filesystem::path watch_list = "config/actions/watchlist.txt";
    std::filesystem::path schema_dir = "config/actions";
    std::vector<std::string> repos;
    int maturity_threshold = 50; // PRs needed before a repo counts as mature
    BackendSpec stage1_backend;
    BackendSpec stage2_backend;
    int runs = 5;
    std::uint64_t seed = 42;
    FixtureMode fixture_mode = FixtureMode::Replay;
    std::filesystem::path fixtures = "fixtures";
    std::filesystem::path out = "out";
    std::optional<std::filesystem::path> stage1_template;
    std::optional<std::filesystem::path> stage2_template;
    std::optional<std::filesystem::path> census;             // discover input
    std::optional<std::filesystem::path> golden_annotations; // evaluate input
    std::optional<std::string> language_command;              // external detector
    std::optional<std::string> token;

    void validate() const;
};

// Key/value config file: "name = value" lines, '#' comments, repos
// comma-separated. CLI flags override file values.
RunConfig load_config(const std::filesystem::path& file);

std::shared_ptr<Session> open_configured_session(const RunConfig& config);

// --- adoption census (discover) ---

struct CensusRow {
    std::string action;
    std::string repo;
    std::int64_t pr_count = 0;
    std::int64_t prs_with_comments = 0;
    std::int64_t comment_count = 0;
};

struct AdoptionRow {
    std::string action;
    Granularity granularity = Granularity::File;
    std::int64_t total_repos = 0;
    std::int64_t mature_repos = 0;
    std::int64_t active_repos = 0; // mature repos with observed comments
    std::int64_t active_prs = 0;
    std::int64_t comments = 0;
};

std::vector<AdoptionRow> summarize_adoption(const std::vector<CensusRow>& census,
    const std::vector<WatchedAction>& watch_list, int maturity_threshold);

// --- report bundle ---

struct LabelDistributionRow {
    std::string source; // action name or "Human"
    std::int64_t total = 0;
    std::map<SixClass, std::int64_t> counts;
};

struct RateComparison {
    std::string action;    // "Total" row aggregates all four
    std::string dimension; // "trigger" or "llm"
    std::string level_a;   // e.g. "Auto" / "GPT-4"
    std::string level_b;
    RateCell a;
    RateCell b;
    std::optional<double> p_value; // absent when a level has no data
};

struct EvaluationMetrics {
    std::string source; // per-source row or "Avg."
    double oa_full6 = 0.0;
    double kappa_full6 = 0.0;
    double oa_stage1 = 0.0;
    double kappa_stage1 = 0.0;
    double oa_stage2 = 0.0;
    double kappa_stage2 = 0.0;
    std::int64_t n = 0;
};

struct SubsequentDistributionRow {
    std::string source;
    std::int64_t total = 0;
    std::map<ChangeCategory, std::int64_t> counts;
};

struct ReportBundle {
    std::vector<AdoptionRow> adoption;
    std::vector<SubsequentDistributionRow> subsequent_distribution;
    std::vector<EvaluationMetrics> evaluation; // empty without golden labels
    std::vector<LabelDistributionRow> label_distribution;
    std::vector<RateComparison> rate_comparisons;
    std::optional<BinnedRateTable> code_ratio_table;
    std::optional<BinnedRateTable> prior_commits_table;
    std::optional<FeatureReport> features;     // absent when the model stage skipped
    std::optional<double> model_accuracy;
    std::optional<double> model_macro_f1;
    std::vector<std::string> notices; // skipped stages, exclusions
    nlohmann::json provenance;        // seeds and parameters

    void check_cross_footing() const;
};

enum class ReportFormat { Markdown, Csv, Json };

// Writes report.md / report.json / tables/*.csv under the directory;
// deterministic bytes for a fixed bundle.
void emit_report(const ReportBundle& bundle, const std::filesystem::path& out_dir);

// --- pipeline stages; each consumes only its predecessor's artifacts ---

void cmd_collect(const RunConfig& config);
void cmd_filter(const RunConfig& config);
void cmd_reconstruct(const RunConfig& config);
void cmd_classify(const RunConfig& config);
void cmd_evaluate(const RunConfig& config);
void cmd_features(const RunConfig& config);
void cmd_explain(const RunConfig& config);
ReportBundle cmd_report(const RunConfig& config);
std::vector<AdoptionRow> cmd_discover(const RunConfig& config);
ReportBundle cmd_pipeline(const RunConfig& config);

} // namespace reviewpulse
