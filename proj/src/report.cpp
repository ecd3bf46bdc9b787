#include "reviewpulse/report.hpp"

#include "reviewpulse/errors.hpp"
#include "reviewpulse/text_util.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace reviewpulse {

void RunConfig::validate() const
{
    if (maturity_threshold < 1)
        throw Error("maturity threshold must be at least 1");
    if (runs < 1)
        throw Error("runs must be at least 1");
}

RunConfig load_config(const std::filesystem::path& file)
{
    std::ifstream in(file);
    if (!in)
        throw Error("cannot read config: " + file.string());
    RunConfig config;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view t = trim(line);
        if (t.empty() || t.front() == '#')
            continue;
        const std::size_t eq = t.find('=');
        if (eq == std::string_view::npos)
            throw Error("malformed config line " + std::to_string(line_no) + " in "
                + file.string());
        const std::string key(trim(t.substr(0, eq)));
        const std::string value(trim(t.substr(eq + 1)));
        if (key == "watchlist")
            config.watch_list = value;
        else if (key == "schema_dir")
            config.schema_dir = value;
        else if (key == "repos") {
            std::stringstream list(value);
            std::string repo;
            while (std::getline(list, repo, ','))
                if (!trim(repo).empty())
                    config.repos.emplace_back(trim(repo));
        } else if (key == "maturity_threshold")
            config.maturity_threshold = std::stoi(value);
        else if (key == "runs")
            config.runs = std::stoi(value);
        else if (key == "seed")
            config.seed = std::stoull(value);
        else if (key == "fixtures")
            config.fixtures = value;
        else if (key == "mode")
            config.fixture_mode = fixture_mode_from_string(value);
        else if (key == "out")
            config.out = value;
        else if (key == "stage1_backend")
            config.stage1_backend.name = value;
        else if (key == "stage1_endpoint")
            config.stage1_backend.endpoint = value;
        else if (key == "stage1_model")
            config.stage1_backend.model = value;
        else if (key == "stage1_script")
            config.stage1_backend.script_path = value;
        else if (key == "stage2_backend")
            config.stage2_backend.name = value;
        else if (key == "stage2_endpoint")
            config.stage2_backend.endpoint = value;
        else if (key == "stage2_model")
            config.stage2_backend.model = value;
        else if (key == "stage2_script")
            config.stage2_backend.script_path = value;
        else if (key == "stage1_template")
            config.stage1_template = value;
        else if (key == "stage2_template")
            config.stage2_template = value;
        else if (key == "census")
            config.census = value;
        else if (key == "golden_annotations")
            config.golden_annotations = value;
        else if (key == "language_command")
            config.language_command = value;
        else
            throw Error("unknown config key '" + key + "' in " + file.string());
    }
    config.validate();
    return config;
}

std::shared_ptr<Session> open_configured_session(const RunConfig& config)
{
    std::optional<std::string> token = config.token;
    if (!token) {
        if (const char* env = std::getenv("REVIEWPULSE_TOKEN"))
            token = env;
    }
    const auto store = std::make_shared<FixtureStore>(config.fixture_mode, config.fixtures);
    return open_session(token, store);
}

std::vector<AdoptionRow> summarize_adoption(const std::vector<CensusRow>& census,
    const std::vector<WatchedAction>& watch_list, int maturity_threshold)
{
    std::vector<AdoptionRow> rows;
    for (const WatchedAction& watched : watch_list) {
        AdoptionRow row;
        row.action = watched.name;
        row.granularity = watched.granularity;
        for (const CensusRow& entry : census) {
            if (entry.action != watched.name)
                continue;
            ++row.total_repos;
            const bool mature = entry.pr_count >= maturity_threshold;
            row.mature_repos += mature;
            if (mature && entry.comment_count > 0) {
                ++row.active_repos;
                row.active_prs += entry.prs_with_comments;
                row.comments += entry.comment_count;
            }
        }
        rows.push_back(row);
    }
    return rows;
}

void ReportBundle::check_cross_footing() const
{
    for (const SubsequentDistributionRow& row : subsequent_distribution) {
        std::int64_t sum = 0;
        for (const auto& [category, count] : row.counts)
            sum += count;
        if (sum != row.total)
            throw Error("subsequent-change table does not cross-foot for " + row.source);
    }
    for (const LabelDistributionRow& row : label_distribution) {
        std::int64_t sum = 0;
        for (const auto& [label, count] : row.counts)
            sum += count;
        if (sum != row.total)
            throw Error("label distribution does not cross-foot for " + row.source);
    }
    if (code_ratio_table) {
        for (const auto& cells : code_ratio_table->cells) {
            std::int64_t sum = 0;
            for (const RateCell& cell : cells)
                sum += cell.count;
            if (sum < 0)
                throw Error("negative bin count");
        }
    }
}

namespace {

    std::string pct(double fraction)
    {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.1f%%", fraction * 100.0);
        return buf;
    }

    std::string num(double value, int decimals = 4)
    {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
        return buf;
    }

    std::string rate_cell_text(const RateCell& cell)
    {
        if (cell.count == 0)
            return "0 (—)";
        return std::to_string(cell.count) + " (" + pct(cell.fraction()) + ")";
    }

    void write_file(const std::filesystem::path& path, const std::string& content)
    {
        std::filesystem::create_directories(path.parent_path());
        std::ofstream out(path, std::ios::binary);
        if (!out)
            throw Error("cannot write " + path.string());
        out << content;
    }

    std::string markdown_report(const ReportBundle& bundle)
    {
        std::string md = "# reviewpulse report\n";

        if (!bundle.adoption.empty()) {
            md += "\n## Adoption by action\n\n";
            md += "| Action | Granularity | Total Repos | Mature Repos | Active Repos | PRs | Comments |\n";
            md += "|---|---|---:|---:|---:|---:|---:|\n";
            std::int64_t totals[5] = { 0, 0, 0, 0, 0 };
            for (const AdoptionRow& row : bundle.adoption) {
                md += "| " + row.action + " | " + std::string(to_string(row.granularity))
                    + " | " + std::to_string(row.total_repos) + " | "
                    + std::to_string(row.mature_repos) + " | "
                    + std::to_string(row.active_repos) + " | "
                    + std::to_string(row.active_prs) + " | " + std::to_string(row.comments)
                    + " |\n";
                totals[0] += row.total_repos;
                totals[1] += row.mature_repos;
                totals[2] += row.active_repos;
                totals[3] += row.active_prs;
                totals[4] += row.comments;
            }
            md += "| **All** | | " + std::to_string(totals[0]) + " | "
                + std::to_string(totals[1]) + " | " + std::to_string(totals[2]) + " | "
                + std::to_string(totals[3]) + " | " + std::to_string(totals[4]) + " |\n";
        }

        if (!bundle.subsequent_distribution.empty()) {
            md += "\n## Post-review file change distribution\n\n";
            md += "| Source | Total | Modified | Renamed-Modified | Renamed-Only | Deleted | Unchanged |\n";
            md += "|---|---:|---|---|---|---|---|\n";
            for (const SubsequentDistributionRow& row : bundle.subsequent_distribution) {
                md += "| " + row.source + " | " + std::to_string(row.total) + " |";
                for (const ChangeCategory category : { ChangeCategory::Modified,
                         ChangeCategory::RenamedModified, ChangeCategory::RenamedOnly,
                         ChangeCategory::Deleted, ChangeCategory::Unchanged }) {
                    const auto it = row.counts.find(category);
                    const std::int64_t count = it != row.counts.end() ? it->second : 0;
                    const double fraction = row.total > 0
                        ? static_cast<double>(count) / static_cast<double>(row.total)
                        : 0.0;
                    md += " " + std::to_string(count) + " (" + pct(fraction) + ") |";
                }
                md += "\n";
            }
        }

        if (!bundle.evaluation.empty()) {
            md += "\n## Classifier evaluation against golden annotations\n\n";
            md += "| Source | n | Full 6-class OA | Full 6-class κ | Stage-1 OA | Stage-1 κ | Stage-2 OA | Stage-2 κ |\n";
            md += "|---|---:|---:|---:|---:|---:|---:|---:|\n";
            for (const EvaluationMetrics& m : bundle.evaluation)
                md += "| " + m.source + " | " + std::to_string(m.n) + " | " + pct(m.oa_full6)
                    + " | " + pct(m.kappa_full6) + " | " + pct(m.oa_stage1) + " | "
                    + pct(m.kappa_stage1) + " | " + pct(m.oa_stage2) + " | "
                    + pct(m.kappa_stage2) + " |\n";
        }

        if (!bundle.label_distribution.empty()) {
            md += "\n## Assigned addressing labels by source\n\n";
            md += "| Source | Total | None | General | Valid-Uncertain | Valid-Unaddressed | Valid-Partially | Valid-Fully |\n";
            md += "|---|---:|---|---|---|---|---|---|\n";
            for (const LabelDistributionRow& row : bundle.label_distribution) {
                md += "| " + row.source + " | " + std::to_string(row.total) + " |";
                for (const SixClass label : all_six_classes()) {
                    const auto it = row.counts.find(label);
                    const std::int64_t count = it != row.counts.end() ? it->second : 0;
                    const double fraction = row.total > 0
                        ? static_cast<double>(count) / static_cast<double>(row.total)
                        : 0.0;
                    md += " " + pct(fraction) + " |";
                }
                md += "\n";
            }
        }

        if (!bundle.rate_comparisons.empty()) {
            md += "\n## Addressing rates by trigger mode and LLM series\n\n";
            md += "| Action | Dimension | Level | Total | Addressed (%) | p-value |\n";
            md += "|---|---|---|---:|---:|---:|\n";
            for (const RateComparison& comparison : bundle.rate_comparisons) {
                const std::string p = comparison.p_value ? num(*comparison.p_value)
                                                         : std::string("—");
                md += "| " + comparison.action + " | " + comparison.dimension + " | "
                    + comparison.level_a + " | " + std::to_string(comparison.a.count) + " | "
                    + (comparison.a.count ? pct(comparison.a.fraction()) : std::string("—"))
                    + " | " + p + " |\n";
                md += "| " + comparison.action + " | " + comparison.dimension + " | "
                    + comparison.level_b + " | " + std::to_string(comparison.b.count) + " | "
                    + (comparison.b.count ? pct(comparison.b.fraction()) : std::string("—"))
                    + " | |\n";
            }
        }

        auto binned_table = [&](const BinnedRateTable& table, const std::string& title) {
            md += "\n## " + title + "\n\n";
            md += "| Bin |";
            for (const std::string& group : table.groups)
                md += " " + group + " |";
            md += "\n|---|";
            for (std::size_t i = 0; i < table.groups.size(); ++i)
                md += "---|";
            md += "\n";
            for (std::size_t bin = 0; bin < table.bins.bin_count(); ++bin) {
                md += "| " + table.bins.interval_label(bin) + " |";
                for (std::size_t g = 0; g < table.groups.size(); ++g)
                    md += " " + rate_cell_text(table.cells[g][bin]) + " |";
                md += "\n";
            }
        };
        if (bundle.code_ratio_table)
            binned_table(*bundle.code_ratio_table, "Addressing rates by binned Code_Text_Ratio");
        if (bundle.prior_commits_table)
            binned_table(*bundle.prior_commits_table,
                "Addressing rates by binned Author_Prior_Commits");

        if (bundle.features) {
            md += "\n## Feature importance and directionality (grouped)\n";
            if (bundle.model_accuracy)
                md += "\nModel test accuracy: " + pct(*bundle.model_accuracy)
                    + (bundle.model_macro_f1
                            ? " (Macro-F1=" + num(*bundle.model_macro_f1, 3) + ")"
                            : "")
                    + "\n";
            for (const GroupStats& group : bundle.features->groups) {
                md += "\n**" + group.name + " (" + std::to_string(group.size)
                    + "):** Σ|φ|=" + num(group.sum_abs_phi) + "; μ|φ|="
                    + num(group.mean_abs_phi) + "\n\n";
                md += "| Feature | Importance (|φ|) | Directionality (ρ) |\n|---|---:|---:|\n";
                std::vector<const FeatureStats*> members;
                for (const FeatureStats& f : bundle.features->features)
                    if (f.group == group.name)
                        members.push_back(&f);
                std::stable_sort(members.begin(), members.end(),
                    [](const FeatureStats* a, const FeatureStats* b) {
                        return a->importance > b->importance;
                    });
                for (const FeatureStats* f : members)
                    md += "| " + f->name + " | " + num(f->importance) + " | "
                        + (f->constant ? "0 (constant)" : num(f->directionality, 2)) + " |\n";
            }
        }

        if (!bundle.notices.empty()) {
            md += "\n## Notices\n\n";
            for (const std::string& notice : bundle.notices)
                md += "- " + notice + "\n";
        }

        md += "\n## Provenance\n\n```json\n" + bundle.provenance.dump(2) + "\n```\n";
        return md;
    }

    nlohmann::json bundle_json(const ReportBundle& bundle)
    {
        nlohmann::json j;
        nlohmann::json adoption = nlohmann::json::array();
        for (const AdoptionRow& row : bundle.adoption)
            adoption.push_back({ { "action", row.action },
                { "granularity", std::string(to_string(row.granularity)) },
                { "total_repos", row.total_repos }, { "mature_repos", row.mature_repos },
                { "active_repos", row.active_repos }, { "active_prs", row.active_prs },
                { "comments", row.comments } });
        j["adoption"] = adoption;

        nlohmann::json subsequent = nlohmann::json::array();
        for (const SubsequentDistributionRow& row : bundle.subsequent_distribution) {
            nlohmann::json counts;
            for (const auto& [category, count] : row.counts)
                counts[std::string(to_string(category))] = count;
            subsequent.push_back({ { "source", row.source }, { "total", row.total },
                { "counts", counts } });
        }
        j["subsequent_distribution"] = subsequent;

        nlohmann::json evaluation = nlohmann::json::array();
        for (const EvaluationMetrics& m : bundle.evaluation)
            evaluation.push_back({ { "source", m.source }, { "n", m.n },
                { "oa_full6", m.oa_full6 }, { "kappa_full6", m.kappa_full6 },
                { "oa_stage1", m.oa_stage1 }, { "kappa_stage1", m.kappa_stage1 },
                { "oa_stage2", m.oa_stage2 }, { "kappa_stage2", m.kappa_stage2 } });
        j["evaluation"] = evaluation;

        nlohmann::json labels = nlohmann::json::array();
        for (const LabelDistributionRow& row : bundle.label_distribution) {
            nlohmann::json counts;
            for (const auto& [label, count] : row.counts)
                counts[std::string(to_string(label))] = count;
            labels.push_back({ { "source", row.source }, { "total", row.total },
                { "counts", counts } });
        }
        j["label_distribution"] = labels;

        nlohmann::json rates = nlohmann::json::array();
        for (const RateComparison& comparison : bundle.rate_comparisons) {
            nlohmann::json entry {
                { "action", comparison.action },
                { "dimension", comparison.dimension },
                { "levels",
                    { { comparison.level_a,
                          { { "total", comparison.a.count },
                              { "addressed", comparison.a.addressed } } },
                        { comparison.level_b,
                            { { "total", comparison.b.count },
                                { "addressed", comparison.b.addressed } } } } },
            };
            if (comparison.p_value)
                entry["p_value"] = *comparison.p_value;
            rates.push_back(entry);
        }
        j["rate_comparisons"] = rates;

        auto binned = [](const BinnedRateTable& table) {
            nlohmann::json out;
            nlohmann::json bins = nlohmann::json::array();
            for (std::size_t bin = 0; bin < table.bins.bin_count(); ++bin) {
                nlohmann::json row { { "interval", table.bins.interval_label(bin) } };
                for (std::size_t g = 0; g < table.groups.size(); ++g)
                    row[table.groups[g]] = { { "count", table.cells[g][bin].count },
                        { "addressed", table.cells[g][bin].addressed } };
                bins.push_back(row);
            }
            out["bins"] = bins;
            return out;
        };
        if (bundle.code_ratio_table)
            j["code_ratio_table"] = binned(*bundle.code_ratio_table);
        if (bundle.prior_commits_table)
            j["prior_commits_table"] = binned(*bundle.prior_commits_table);

        if (bundle.features) {
            nlohmann::json features = nlohmann::json::array();
            for (const FeatureStats& f : bundle.features->features)
                features.push_back({ { "name", f.name }, { "group", f.group },
                    { "importance", f.importance },
                    { "directionality", f.directionality }, { "constant", f.constant } });
            nlohmann::json groups = nlohmann::json::array();
            for (const GroupStats& g : bundle.features->groups)
                groups.push_back({ { "name", g.name }, { "sum_abs_phi", g.sum_abs_phi },
                    { "mean_abs_phi", g.mean_abs_phi }, { "size", g.size } });
            j["feature_report"] = { { "features", features }, { "groups", groups } };
            if (bundle.model_accuracy)
                j["feature_report"]["accuracy"] = *bundle.model_accuracy;
            if (bundle.model_macro_f1)
                j["feature_report"]["macro_f1"] = *bundle.model_macro_f1;
        }
        j["notices"] = bundle.notices;
        j["provenance"] = bundle.provenance;
        return j;
    }

    std::string adoption_csv(const ReportBundle& bundle)
    {
        std::string csv = "action,granularity,total_repos,mature_repos,active_repos,"
                          "active_prs,comments\n";
        for (const AdoptionRow& row : bundle.adoption)
            csv += row.action + "," + std::string(to_string(row.granularity)) + ","
                + std::to_string(row.total_repos) + "," + std::to_string(row.mature_repos)
                + "," + std::to_string(row.active_repos) + ","
                + std::to_string(row.active_prs) + "," + std::to_string(row.comments) + "\n";
        return csv;
    }

    std::string labels_csv(const ReportBundle& bundle)
    {
        std::string csv = "source,total";
        for (const SixClass label : all_six_classes())
            csv += "," + std::string(to_string(label));
        csv += "\n";
        for (const LabelDistributionRow& row : bundle.label_distribution) {
            csv += row.source + "," + std::to_string(row.total);
            for (const SixClass label : all_six_classes()) {
                const auto it = row.counts.find(label);
                csv += "," + std::to_string(it != row.counts.end() ? it->second : 0);
            }
            csv += "\n";
        }
        return csv;
    }

} // namespace

void emit_report(const ReportBundle& bundle, const std::filesystem::path& out_dir)
{
    bundle.check_cross_footing();
    write_file(out_dir / "report.md", markdown_report(bundle));
    write_file(out_dir / "report.json", bundle_json(bundle).dump(2) + "\n");
    write_file(out_dir / "tables" / "adoption.csv", adoption_csv(bundle));
    write_file(out_dir / "tables" / "label_distribution.csv", labels_csv(bundle));
}

} // namespace reviewpulse
