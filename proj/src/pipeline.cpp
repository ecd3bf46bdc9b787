#include "reviewpulse/report.hpp"

#include "reviewpulse/correlation.hpp"
#include "reviewpulse/errors.hpp"
#include "reviewpulse/features.hpp"
#include "reviewpulse/forest.hpp"
#include "reviewpulse/lda.hpp"
#include "reviewpulse/text_util.hpp"
#include "reviewpulse/time_util.hpp"
#include "reviewpulse/two_stage.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

namespace reviewpulse {

namespace {

    // --- shared artifact helpers ---

    void write_lines(const std::filesystem::path& file, const std::vector<std::string>& lines)
    {
        std::filesystem::create_directories(file.parent_path());
        std::ofstream out(file, std::ios::binary);
        if (!out)
            throw Error("cannot write " + file.string());
        for (const std::string& line : lines)
            out << line << "\n";
    }

    std::vector<nlohmann::json> read_jsonl(const std::filesystem::path& file)
    {
        std::ifstream in(file);
        if (!in)
            throw Error("missing stage artifact: " + file.string());
        std::vector<nlohmann::json> records;
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (trim(line).empty())
                continue;
            try {
                records.push_back(nlohmann::json::parse(line));
            } catch (const nlohmann::json::exception& e) {
                throw DecodeError(std::string("bad JSON line: ") + e.what(),
                    file.string() + ":" + std::to_string(line_no));
            }
        }
        return records;
    }

    void write_json(const std::filesystem::path& file, const nlohmann::json& j)
    {
        std::filesystem::create_directories(file.parent_path());
        std::ofstream out(file, std::ios::binary);
        out << j.dump(2) << "\n";
    }

    nlohmann::json read_json(const std::filesystem::path& file)
    {
        std::ifstream in(file);
        if (!in)
            throw Error("missing stage artifact: " + file.string());
        nlohmann::json j;
        in >> j;
        return j;
    }

    // A collected comment before reconstruction.
    struct CollectedComment {
        RepoRef repo;
        RawComment comment;
        CommentSource source;
        PullRequestRecord pr;
        std::optional<TriggerMode> trigger;
        std::optional<std::string> llm_model;
        std::int64_t timeline_index = 0;
        std::int64_t prior_comment_chars = 0;
    };

    nlohmann::json collected_to_json(const CollectedComment& c)
    {
        nlohmann::json j {
            { "repo", c.repo },
            { "comment", c.comment },
            { "source", { { "kind", std::string(to_string(c.source.kind)) },
                            { "action", c.source.action } } },
            { "pr", c.pr },
            { "timeline_index", c.timeline_index },
            { "prior_comment_chars", c.prior_comment_chars },
        };
        if (c.trigger)
            j["trigger"] = std::string(to_string(*c.trigger));
        if (c.llm_model)
            j["llm_model"] = *c.llm_model;
        return j;
    }

    CollectedComment collected_from_json(const nlohmann::json& j)
    {
        CollectedComment c;
        c.repo = j.at("repo").get<RepoRef>();
        c.comment = j.at("comment").get<RawComment>();
        c.source.kind = source_kind_from_string(j.at("source").at("kind").get<std::string>());
        c.source.action = j.at("source").value("action", "");
        c.pr = j.at("pr").get<PullRequestRecord>();
        c.timeline_index = j.value("timeline_index", std::int64_t { 0 });
        c.prior_comment_chars = j.value("prior_comment_chars", std::int64_t { 0 });
        if (j.contains("trigger"))
            c.trigger = j["trigger"].get<std::string>() == "manual" ? TriggerMode::Manual
                                                                    : TriggerMode::Auto;
        if (j.contains("llm_model"))
            c.llm_model = j["llm_model"].get<std::string>();
        return c;
    }

    constexpr const char* kActionsBot = "github-actions[bot]";

    double round1(double v) { return std::round(v * 10.0) / 10.0; }

} // namespace

// --- collect ---

namespace {

    struct RepoCollection {
        CensusRow census;
        std::vector<CollectedComment> comments;
        std::vector<CommitInfo> history;
        std::optional<RepoStats> stats;
        std::vector<std::string> notices;
    };

    RepoCollection collect_repo(Session& session, const RepoRef& repo,
        const std::vector<WatchedAction>& watch_list, const RunConfig& config)
    {
        RepoCollection result;
        result.census.repo = repo.full();

        // workflow scan at the default branch
        std::vector<WorkflowFile> workflows;
        for (const std::string& path : list_workflow_files(session, repo)) {
            const std::optional<std::string> content = fetch_file_at(session, repo, path);
            if (content)
                workflows.push_back({ path, *content, "", 0 });
        }
        const ScanResult scan = scan_workflows(workflows, watch_list);
        for (const std::string& warning : scan.warnings)
            result.notices.push_back(repo.full() + ": " + warning);
        if (scan.references.empty())
            return result;

        std::set<std::string> actions, files;
        for (const ActionReference& ref : scan.references) {
            actions.insert(ref.action);
            files.insert(ref.path);
        }
        if (actions.size() > 1 || files.size() > 1) {
            result.notices.push_back(repo.full()
                + ": ambiguous action attribution (multiple actions or files), excluded");
            return result;
        }
        const ActionReference& reference = scan.references.front();
        result.census.action = reference.action;
        const WatchedAction* watched = nullptr;
        for (const WatchedAction& w : watch_list)
            if (w.name == reference.action)
                watched = &w;
        if (!watched)
            return result;

        result.census.pr_count = count_prs(session, repo);
        const bool mature = result.census.pr_count
            >= static_cast<std::int64_t>(config.maturity_threshold);

        const ActionSchema schema = load_action_schema_for(config.schema_dir, reference.action);
        const WorkflowFile* latest_workflow = nullptr;
        for (const WorkflowFile& wf : workflows)
            if (wf.path == reference.path)
                latest_workflow = &wf;

        // PRs reviewed by the action, both query kinds
        std::set<int> pr_numbers;
        for (const PrQueryKind kind : { PrQueryKind::InlineByActions,
                 PrQueryKind::GeneralByActions })
            for (const int number : search_prs(session, repo, kind))
                pr_numbers.insert(number);

        struct PrComments {
            PullRequestRecord pr;
            std::vector<RawComment> all; // both kinds, chronological
        };
        std::vector<PrComments> by_pr;
        std::int64_t action_comments = 0;
        std::int64_t prs_with_comments = 0;
        for (const int number : pr_numbers) {
            PrComments entry { fetch_pr(session, repo, number), {} };
            for (const CommentKind kind : { CommentKind::Inline, CommentKind::General })
                for (RawComment& comment : fetch_comments(session, repo, number, kind))
                    entry.all.push_back(std::move(comment));
            std::stable_sort(entry.all.begin(), entry.all.end(),
                [](const RawComment& a, const RawComment& b) {
                    return std::tie(a.created_at, a.id) < std::tie(b.created_at, b.id);
                });
            std::int64_t in_pr = 0;
            for (const RawComment& comment : entry.all)
                in_pr += comment.author_login == kActionsBot;
            action_comments += in_pr;
            prs_with_comments += in_pr > 0;
            by_pr.push_back(std::move(entry));
        }
        result.census.comment_count = action_comments;
        result.census.prs_with_comments = prs_with_comments;

        // the addressing dataset draws only on mature repos and skips
        // PR-level actions
        if (!mature || watched->granularity == Granularity::Pr || action_comments == 0)
            return result;

        // AI review activation period bounds the human comparison set
        std::int64_t window_lo = INT64_MAX, window_hi = INT64_MIN;
        for (const PrComments& entry : by_pr)
            for (const RawComment& comment : entry.all)
                if (comment.author_login == kActionsBot) {
                    window_lo = std::min(window_lo, comment.created_at);
                    window_hi = std::max(window_hi, comment.created_at);
                }

        const SourceKind action_kind = watched->granularity == Granularity::Hunk
            ? SourceKind::HunkAction
            : SourceKind::FileAction;

        for (const PrComments& entry : by_pr) {
            std::int64_t index = 0;
            std::int64_t prior_chars = 0;
            for (const RawComment& comment : entry.all) {
                ++index;
                const bool from_action = comment.author_login == kActionsBot;
                const bool human_candidate = !from_action
                    && comment.kind == CommentKind::Inline
                    && comment.created_at >= window_lo && comment.created_at <= window_hi;
                if (from_action || human_candidate) {
                    CollectedComment collected;
                    collected.repo = repo;
                    collected.comment = comment;
                    collected.pr = entry.pr;
                    collected.timeline_index = index;
                    collected.prior_comment_chars = prior_chars;
                    if (from_action) {
                        collected.source = { action_kind, reference.action };
                        // configuration at the reviewed commit, latest as fallback
                        const WorkflowFile* wf = latest_workflow;
                        std::optional<std::string> at_commit;
                        if (comment.inline_meta)
                            at_commit = fetch_file_at(session, repo, reference.path,
                                comment.inline_meta->original_commit_id);
                        WorkflowFile commit_wf;
                        if (at_commit) {
                            commit_wf = { reference.path, *at_commit, "", 0 };
                            wf = &commit_wf;
                        }
                        if (wf) {
                            const ScanResult at = scan_workflows({ *wf }, watch_list);
                            if (!at.references.empty()) {
                                collected.trigger = derive_trigger_mode(*wf,
                                    at.references.front());
                                const ConfigSnapshot snapshot = extract_config(*wf,
                                    at.references.front(), schema);
                                collected.llm_model = llm_model_value(snapshot);
                            }
                        }
                    } else {
                        collected.source = { SourceKind::Human, "" };
                    }
                    result.comments.push_back(std::move(collected));
                }
                prior_chars += static_cast<std::int64_t>(comment.body.size());
            }
        }

        result.history = fetch_commit_history(session, repo);
        const std::string stats_ref = !result.history.empty() ? result.history.back().sha
                                                              : std::string();
        if (!stats_ref.empty())
            result.stats = fetch_repo_stats(session, repo, stats_ref);
        return result;
    }

} // namespace

void cmd_collect(const RunConfig& config)
{
    const std::vector<WatchedAction> watch_list = load_watch_list(config.watch_list);
    const std::shared_ptr<Session> session = open_configured_session(config);

    std::vector<std::string> collected_lines, census_lines, history_lines, stats_lines,
        notices;
    for (const std::string& repo_name : config.repos) {
        const RepoRef repo = RepoRef::parse(repo_name);
        const RepoCollection collection = collect_repo(*session, repo, watch_list, config);
        for (const CollectedComment& comment : collection.comments)
            collected_lines.push_back(collected_to_json(comment).dump());
        if (!collection.census.action.empty())
            census_lines.push_back(nlohmann::json {
                { "action", collection.census.action },
                { "repo", collection.census.repo },
                { "pr_count", collection.census.pr_count },
                { "prs_with_comments", collection.census.prs_with_comments },
                { "comment_count", collection.census.comment_count },
            }.dump());
        if (!collection.history.empty())
            history_lines.push_back(nlohmann::json {
                { "repo", repo },
                { "commits", collection.history },
            }.dump());
        if (collection.stats)
            stats_lines.push_back(nlohmann::json {
                { "repo", repo },
                { "stats", *collection.stats },
            }.dump());
        notices.insert(notices.end(), collection.notices.begin(), collection.notices.end());
    }
    write_lines(config.out / "collected.jsonl", collected_lines);
    write_lines(config.out / "census.jsonl", census_lines);
    write_lines(config.out / "commit_history.jsonl", history_lines);
    write_lines(config.out / "repo_stats.jsonl", stats_lines);
    write_json(config.out / "collect_notices.json", nlohmann::json { { "notices", notices } });
}

// --- filter ---

void cmd_filter(const RunConfig& config)
{
    std::vector<CollectedComment> collected;
    for (const nlohmann::json& j : read_jsonl(config.out / "collected.jsonl"))
        collected.push_back(collected_from_json(j));

    const LanguageDetector detector = config.language_command
        ? external_detector(*config.language_command)
        : LanguageDetector(detect_language);

    auto run_mode = [&](CollectionMode mode) {
        std::vector<RawComment> comments;
        std::map<int, PullRequestRecord> prs;
        std::map<std::int64_t, int> comment_pr;
        std::map<std::int64_t, const CollectedComment*> by_id;
        for (const CollectedComment& c : collected) {
            const bool human = c.source.kind == SourceKind::Human;
            if ((mode == CollectionMode::Human) != human)
                continue;
            comments.push_back(c.comment);
            prs[c.pr.number] = c.pr;
            comment_pr[c.comment.id] = c.pr.number;
            by_id[c.comment.id] = &c;
        }
        auto [retained, report] = filter_comments(comments, prs, comment_pr, detector, mode);
        std::vector<std::string> lines;
        for (const RawComment& comment : retained)
            lines.push_back(collected_to_json(*by_id.at(comment.id)).dump());
        return std::pair(std::move(lines), std::move(report));
    };

    auto [action_lines, action_report] = run_mode(CollectionMode::Action);
    auto [human_lines, human_report] = run_mode(CollectionMode::Human);

    std::vector<std::string> lines = std::move(action_lines);
    lines.insert(lines.end(), human_lines.begin(), human_lines.end());
    write_lines(config.out / "filtered.jsonl", lines);

    FilterReport combined;
    combined.input_count = action_report.input_count + human_report.input_count;
    combined.retained_count = action_report.retained_count + human_report.retained_count;
    for (const auto& [reason, count] : action_report.removed_by)
        combined.removed_by[reason] += count;
    for (const auto& [reason, count] : human_report.removed_by)
        combined.removed_by[reason] += count;
    combined.check_accounting();
    write_json(config.out / "filter_report.json",
        nlohmann::json {
            { "action", action_report.to_json() },
            { "human", human_report.to_json() },
            { "combined", combined.to_json() },
        });
}

// --- reconstruct ---

namespace {

    std::int64_t count_lines_at(Session& session, const RepoRef& repo, const std::string& path,
        const std::string& ref)
    {
        try {
            const std::optional<std::string> content = fetch_file_at(session, repo, path, ref);
            if (!content)
                return 0;
            return static_cast<std::int64_t>(split_lines(normalize_lf(*content)).size());
        } catch (const UnsupportedContent&) {
            return 0;
        }
    }

    void count_reviewed_lines(const std::vector<ReviewedChange>& reviewed,
        std::int64_t& added, std::int64_t& removed)
    {
        added = 0;
        removed = 0;
        for (const ReviewedChange& change : reviewed)
            for (const HunkLine& line : change.lines) {
                added += line.origin == LineOrigin::Added;
                removed += line.origin == LineOrigin::Removed;
            }
    }

    ModificationStats modification_stats(Session& session, const RepoRef& repo,
        const PullRequestRecord& pr, const std::string& reviewed_ref,
        const std::string& reviewed_path, const std::vector<ReviewedChange>& reviewed,
        const std::vector<CommitInfo>& pr_commits)
    {
        ModificationStats stats;
        const std::vector<FileDiff> commit_diff = compare_commits(session, repo,
            pr.base_commit, reviewed_ref);
        stats.commit_changed_files = static_cast<std::int64_t>(commit_diff.size());
        for (const FileDiff& file : commit_diff) {
            stats.commit_add += file.additions;
            stats.commit_del += file.deletions;
            const std::string base_path = file.previous_path ? *file.previous_path : file.path;
            if (file.status != FileStatus::Added)
                stats.commit_base_lines += count_lines_at(session, repo, base_path,
                    pr.base_commit);
            if (file.path == reviewed_path) {
                stats.file_add = file.additions;
                stats.file_del = file.deletions;
                if (file.status != FileStatus::Added)
                    stats.file_base_lines = count_lines_at(session, repo, base_path,
                        pr.base_commit);
            }
        }
        count_reviewed_lines(reviewed, stats.comment_add, stats.comment_del);
        for (const CommitInfo& commit : pr_commits)
            if (commit.sha == reviewed_ref) {
                stats.author_login = commit.author_login;
                stats.author_is_bot = commit.author_is_bot;
                stats.author_is_anon = !commit.author_login.has_value();
            }
        return stats;
    }

    // hunk/human inline comments: slice the recorded diff_hunk
    std::optional<std::vector<ReviewedChange>> reconstruct_inline(const RawComment& comment)
    {
        const InlineMeta& meta = *comment.inline_meta;
        if (trim(meta.diff_hunk).empty())
            return std::nullopt;
        try {
            const Hunk hunk = parse_hunk(meta.diff_hunk);
            ReviewedChange change;
            change.path = meta.path;
            change.reviewed_commit = meta.original_commit_id;
            change.end_line = meta.original_line;
            change.start_line = meta.original_start_line
                ? *meta.original_start_line
                : std::max(hunk.new_start, meta.original_line - 3);
            change.lines = slice_hunk(hunk, meta.original_start_line, meta.original_line);
            return std::vector<ReviewedChange> { std::move(change) };
        } catch (const HunkParseError&) {
            return std::nullopt;
        } catch (const SliceError&) {
            return std::nullopt;
        }
    }

} // namespace

void cmd_reconstruct(const RunConfig& config)
{
    std::vector<CollectedComment> filtered;
    for (const nlohmann::json& j : read_jsonl(config.out / "filtered.jsonl"))
        filtered.push_back(collected_from_json(j));
    const std::shared_ptr<Session> session = open_configured_session(config);

    // caches shared across comments of one PR / repo
    std::map<std::string, std::map<std::string, std::string>> rename_maps; // repo|merge
    std::map<std::string, std::vector<CommitInfo>> pr_commit_cache;        // repo|pr

    auto pr_commits_for = [&](const RepoRef& repo, int number) -> const std::vector<CommitInfo>& {
        const std::string key = repo.full() + "|" + std::to_string(number);
        auto it = pr_commit_cache.find(key);
        if (it == pr_commit_cache.end())
            it = pr_commit_cache.emplace(key, fetch_pr_commits(*session, repo, number)).first;
        return it->second;
    };
    auto rename_map_for = [&](const RepoRef& repo, const PullRequestRecord& pr)
        -> const std::map<std::string, std::string>& {
        const std::string key = repo.full() + "|" + *pr.merge_commit;
        auto it = rename_maps.find(key);
        if (it == rename_maps.end())
            it = rename_maps
                     .emplace(key,
                         build_rename_map(compare_commits(*session, repo, pr.base_commit,
                             *pr.merge_commit)))
                     .first;
        return it->second;
    };

    std::vector<RawComment> retained;
    std::map<std::int64_t, ReconstructionOutcome> outcomes;
    std::vector<CommentContext> segment_contexts; // extra contexts beyond the first
    std::int64_t path_unmatched = 0;

    for (const CollectedComment& c : filtered) {
        retained.push_back(c.comment);
        ReconstructionOutcome outcome;
        try {
            std::vector<std::pair<std::string, std::vector<ReviewedChange>>> by_path;
            std::vector<std::pair<std::string, std::string>> segments; // general only
            std::string reviewed_ref;

            if (c.comment.kind == CommentKind::Inline) {
                reviewed_ref = c.comment.inline_meta->original_commit_id;
                std::optional<std::vector<ReviewedChange>> reviewed;
                if (c.source.kind == SourceKind::FileAction)
                    reviewed = reconstruct_file_level(*session, c.repo, c.comment, c.pr);
                else
                    reviewed = reconstruct_inline(c.comment);
                if (reviewed)
                    by_path.emplace_back(c.comment.inline_meta->path, std::move(*reviewed));
            } else {
                // general comments: split by file, nearest preceding commit
                segments = split_general_comment(c.comment.body);
                const std::vector<CommitInfo>& commits = pr_commits_for(c.repo, c.pr.number);
                const CommitInfo commit = nearest_preceding_commit(commits,
                    c.comment.created_at);
                reviewed_ref = commit.sha;
                const std::vector<FileDiff> compared = compare_commits(*session, c.repo,
                    c.pr.base_commit, commit.sha);
                for (const auto& [path, text] : segments) {
                    if (path == "(preamble)")
                        continue;
                    bool matched = false;
                    for (const FileDiff& file : compared) {
                        if (file.path != path || file.patch.empty())
                            continue;
                        std::vector<ReviewedChange> changes;
                        for (const Hunk& hunk : parse_patch(file.patch)) {
                            ReviewedChange change;
                            change.path = path;
                            change.reviewed_commit = commit.sha;
                            change.start_line = hunk.new_start;
                            change.end_line = hunk.last_new_line();
                            change.lines = hunk.lines;
                            changes.push_back(std::move(change));
                        }
                        if (!changes.empty()) {
                            by_path.emplace_back(path, std::move(changes));
                            matched = true;
                        }
                        break;
                    }
                    if (!matched)
                        ++path_unmatched; // kept but excluded from addressing analysis
                }
            }

            if (by_path.empty()) {
                outcomes[c.comment.id] = std::move(outcome); // inconsistent
                continue;
            }

            bool first = true;
            for (auto& [path, reviewed] : by_path) {
                CommentContext context;
                context.repo = c.repo;
                context.comment = c.comment;
                context.source = c.source;
                context.pr = c.pr;
                context.trigger = c.trigger;
                context.llm_model = c.llm_model;
                context.timeline_index = c.timeline_index;
                context.prior_comment_chars = c.prior_comment_chars;
                context.reviewed = std::move(reviewed);
                if (c.comment.kind == CommentKind::General) {
                    context.segment_path = path;
                    for (const auto& [seg_path, seg_text] : segments)
                        if (seg_path == path)
                            context.segment_text = seg_text;
                }
                context.subsequent = subsequent_change(*session, c.repo, path, reviewed_ref,
                    *c.pr.merge_commit, rename_map_for(c.repo, c.pr));
                context.modification = modification_stats(*session, c.repo, c.pr,
                    reviewed_ref, path, context.reviewed,
                    pr_commits_for(c.repo, c.pr.number));
                context.validate();
                if (first) {
                    outcome.context = std::move(context);
                    first = false;
                } else {
                    segment_contexts.push_back(std::move(context));
                }
            }
        } catch (const UnsupportedContent&) {
            outcome.context.reset();
            outcome.unsupported_content = true;
        } catch (const ApproximationError&) {
            outcome.context.reset();
        }
        outcomes[c.comment.id] = std::move(outcome);
    }

    const nlohmann::json report_json = read_json(config.out / "filter_report.json");
    FilterReport report;
    report.input_count = report_json.at("combined").at("input_count").get<std::int64_t>();
    report.retained_count = report_json.at("combined").at("retained_count").get<std::int64_t>();
    for (const auto& [key, value] : report_json.at("combined").at("removed_by").items()) {
        for (const RemovalReason reason : { RemovalReason::NotMerged, RemovalReason::PostMerge,
                 RemovalReason::NonEnglish, RemovalReason::NotFirstInThread,
                 RemovalReason::BotAuthor, RemovalReason::UnsupportedContent })
            if (std::string(to_string(reason)) == key)
                report.removed_by[reason] = value.get<std::int64_t>();
    }

    std::vector<CommentContext> dataset = build_dataset(retained, outcomes, report);
    dataset.insert(dataset.end(), segment_contexts.begin(), segment_contexts.end());
    std::stable_sort(dataset.begin(), dataset.end(),
        [](const CommentContext& a, const CommentContext& b) {
            return std::tie(a.repo.owner, a.repo.name, a.pr.number, a.comment.created_at,
                       a.comment.id, a.segment_path)
                < std::tie(b.repo.owner, b.repo.name, b.pr.number, b.comment.created_at,
                    b.comment.id, b.segment_path);
        });

    std::vector<std::string> lines;
    for (const CommentContext& context : dataset)
        lines.push_back(nlohmann::json(context).dump());
    write_lines(config.out / "dataset.jsonl", lines);

    std::int64_t inconsistent = 0;
    for (const auto& [id, outcome] : outcomes)
        inconsistent += !outcome.context && !outcome.unsupported_content;
    write_json(config.out / "reconstruct_report.json",
        nlohmann::json {
            { "dataset_size", dataset.size() },
            { "inconsistent", inconsistent },
            { "path_unmatched_segments", path_unmatched },
            { "filter_report", report.to_json() },
        });
}

// --- classify ---

void cmd_classify(const RunConfig& config)
{
    std::vector<CommentContext> dataset;
    for (const nlohmann::json& j : read_jsonl(config.out / "dataset.jsonl"))
        dataset.push_back(j.get<CommentContext>());

    std::shared_ptr<Session> session;
    if (config.stage1_backend.name == "http" || config.stage2_backend.name == "http")
        session = open_configured_session(config);
    const std::shared_ptr<Backend> stage1 = make_backend(config.stage1_backend, session);
    const std::shared_ptr<Backend> stage2 = make_backend(config.stage2_backend, session);
    const PromptTemplate stage1_prompt = config.stage1_template
        ? PromptTemplate::from_file(*config.stage1_template)
        : default_stage1_template();
    const PromptTemplate stage2_prompt = config.stage2_template
        ? PromptTemplate::from_file(*config.stage2_template)
        : default_stage2_template();

    std::vector<std::string> lines;
    for (const CommentContext& context : dataset) {
        const VoteResult result = run_two_stage(context, *stage1, *stage2, config.runs,
            stage1_prompt, stage2_prompt);
        nlohmann::json j {
            { "comment_id", context.comment.id },
            { "source", { { "kind", std::string(to_string(context.source.kind)) },
                            { "action", context.source.action } } },
            { "final", std::string(to_string(result.final)) },
            { "stage1_runs", result.deciding_runs().size() }, // replaced below
            { "agreement", result.agreement },
            { "short_circuited", result.short_circuited },
        };
        nlohmann::json stage1_runs = nlohmann::json::array();
        for (const Validity run : result.stage1_runs)
            stage1_runs.push_back(std::string(to_string(run)));
        j["stage1_runs"] = stage1_runs;
        if (!result.items.empty())
            j["items"] = result.items;
        if (result.stage2_runs) {
            nlohmann::json stage2_runs = nlohmann::json::array();
            for (const Addressing run : *result.stage2_runs)
                stage2_runs.push_back(std::string(to_string(run)));
            j["stage2_runs"] = stage2_runs;
        }
        if (context.segment_path)
            j["segment_path"] = *context.segment_path;
        lines.push_back(j.dump());
    }
    write_lines(config.out / "labels.jsonl", lines);
    write_json(config.out / "classify_stats.json",
        nlohmann::json {
            { "stage1_calls", stage1->call_count() },
            { "stage2_calls", stage2->call_count() },
            { "runs", config.runs },
        });
}

// --- evaluate ---

namespace {

    struct LabelRecord {
        std::int64_t comment_id = 0;
        SourceKind kind = SourceKind::Human;
        std::string action;
        SixClass final = SixClass::None;
    };

    std::vector<LabelRecord> read_labels(const std::filesystem::path& file)
    {
        std::vector<LabelRecord> labels;
        for (const nlohmann::json& j : read_jsonl(file)) {
            LabelRecord record;
            record.comment_id = j.at("comment_id").get<std::int64_t>();
            record.kind = source_kind_from_string(j.at("source").at("kind").get<std::string>());
            record.action = j.at("source").value("action", "");
            record.final = six_class_from_string(j.at("final").get<std::string>());
            labels.push_back(std::move(record));
        }
        return labels;
    }

    std::string source_group(SourceKind kind)
    {
        switch (kind) {
        case SourceKind::FileAction:
            return "File-level Action";
        case SourceKind::HunkAction:
            return "Hunk-level Action";
        case SourceKind::Human:
            return "Human";
        }
        return "Human";
    }

    EvaluationMetrics metrics_for(const std::string& source,
        const std::vector<SixClass>& gold, const std::vector<SixClass>& pred)
    {
        EvaluationMetrics m;
        m.source = source;
        m.n = static_cast<std::int64_t>(gold.size());
        if (gold.empty())
            return m;
        std::vector<std::string> gold6, pred6;
        for (std::size_t i = 0; i < gold.size(); ++i) {
            gold6.emplace_back(to_string(gold[i]));
            pred6.emplace_back(to_string(pred[i]));
        }
        const auto full = confusion(gold6, pred6, collapse_domain(CollapseScheme::Full6));
        m.oa_full6 = overall_accuracy(full);
        m.kappa_full6 = cohen_kappa(full);

        const auto stage1 = confusion(collapse(gold, CollapseScheme::Stage1),
            collapse(pred, CollapseScheme::Stage1), collapse_domain(CollapseScheme::Stage1));
        m.oa_stage1 = overall_accuracy(stage1);
        m.kappa_stage1 = cohen_kappa(stage1);

        // Stage-2 judged on comments correctly identified as Valid
        std::vector<SixClass> gold2, pred2;
        for (std::size_t i = 0; i < gold.size(); ++i)
            if (is_valid_class(gold[i]) && is_valid_class(pred[i])) {
                gold2.push_back(gold[i]);
                pred2.push_back(pred[i]);
            }
        if (!gold2.empty()) {
            const auto stage2 = confusion(collapse(gold2, CollapseScheme::Stage2),
                collapse(pred2, CollapseScheme::Stage2),
                collapse_domain(CollapseScheme::Stage2));
            m.oa_stage2 = overall_accuracy(stage2);
            m.kappa_stage2 = cohen_kappa(stage2);
        }
        return m;
    }

} // namespace

void cmd_evaluate(const RunConfig& config)
{
    if (!config.golden_annotations)
        throw Error("evaluate requires golden annotations (set golden_annotations)");
    const std::vector<LabelRecord> labels = read_labels(config.out / "labels.jsonl");
    std::map<std::int64_t, SixClass> golden;
    for (const nlohmann::json& j : read_jsonl(*config.golden_annotations))
        golden[j.at("comment_id").get<std::int64_t>()] = six_class_from_string(
            j.at("six_class_label").get<std::string>());

    std::map<std::string, std::pair<std::vector<SixClass>, std::vector<SixClass>>> by_source;
    std::set<std::int64_t> seen;
    for (const LabelRecord& record : labels) {
        const auto it = golden.find(record.comment_id);
        if (it == golden.end() || seen.count(record.comment_id))
            continue;
        seen.insert(record.comment_id);
        auto& [gold, pred] = by_source[source_group(record.kind)];
        gold.push_back(it->second);
        pred.push_back(record.final);
    }

    std::vector<EvaluationMetrics> rows;
    std::vector<SixClass> all_gold, all_pred;
    for (const char* source : { "File-level Action", "Hunk-level Action", "Human" }) {
        const auto it = by_source.find(source);
        if (it == by_source.end())
            continue;
        rows.push_back(metrics_for(source, it->second.first, it->second.second));
        all_gold.insert(all_gold.end(), it->second.first.begin(), it->second.first.end());
        all_pred.insert(all_pred.end(), it->second.second.begin(), it->second.second.end());
    }
    if (!rows.empty()) {
        EvaluationMetrics avg;
        avg.source = "Avg.";
        avg.n = static_cast<std::int64_t>(all_gold.size());
        for (const EvaluationMetrics& m : rows) {
            avg.oa_full6 += m.oa_full6;
            avg.kappa_full6 += m.kappa_full6;
            avg.oa_stage1 += m.oa_stage1;
            avg.kappa_stage1 += m.kappa_stage1;
            avg.oa_stage2 += m.oa_stage2;
            avg.kappa_stage2 += m.kappa_stage2;
        }
        const double n = static_cast<double>(rows.size());
        avg.oa_full6 /= n;
        avg.kappa_full6 /= n;
        avg.oa_stage1 /= n;
        avg.kappa_stage1 /= n;
        avg.oa_stage2 /= n;
        avg.kappa_stage2 /= n;
        rows.push_back(avg);
    }

    nlohmann::json out = nlohmann::json::array();
    for (const EvaluationMetrics& m : rows)
        out.push_back({ { "source", m.source }, { "n", m.n },
            { "oa_full6", m.oa_full6 }, { "kappa_full6", m.kappa_full6 },
            { "oa_stage1", m.oa_stage1 }, { "kappa_stage1", m.kappa_stage1 },
            { "oa_stage2", m.oa_stage2 }, { "kappa_stage2", m.kappa_stage2 } });

    // macro-F1 over the full six-class task, all sources pooled
    nlohmann::json result { { "rows", out } };
    if (!all_gold.empty()) {
        std::vector<std::string> gold6, pred6;
        for (std::size_t i = 0; i < all_gold.size(); ++i) {
            gold6.emplace_back(to_string(all_gold[i]));
            pred6.emplace_back(to_string(all_pred[i]));
        }
        result["macro_f1_full6"] = macro_f1(confusion(gold6, pred6,
            collapse_domain(CollapseScheme::Full6)));
    }
    write_json(config.out / "evaluation.json", result);
}

// --- features ---

namespace {

    struct FeatureRow {
        std::int64_t comment_id = 0;
        std::string segment_path;
        bool addressed = false;
        bool human = false;
        std::string action;
        std::optional<TriggerMode> trigger;
        LlmSeries llm = LlmSeries::Unknown;
        FeatureVector features;
    };

    std::string csv_escape(const std::string& field)
    {
        if (field.find_first_of(",\"\n") == std::string::npos)
            return field;
        std::string out = "\"";
        for (const char c : field) {
            if (c == '"')
                out += "\"\"";
            else
                out.push_back(c);
        }
        out += "\"";
        return out;
    }

    std::string fmt_double(double v)
    {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        return buf;
    }

} // namespace

void cmd_features(const RunConfig& config)
{
    std::vector<CommentContext> dataset;
    for (const nlohmann::json& j : read_jsonl(config.out / "dataset.jsonl"))
        dataset.push_back(j.get<CommentContext>());
    const std::vector<LabelRecord> labels = read_labels(config.out / "labels.jsonl");

    std::map<std::int64_t, SixClass> label_of;
    for (const LabelRecord& record : labels)
        if (!label_of.count(record.comment_id))
            label_of[record.comment_id] = record.final;

    std::map<std::string, RepoStats> stats_of;
    for (const nlohmann::json& j : read_jsonl(config.out / "repo_stats.jsonl"))
        stats_of[j.at("repo").get<std::string>()] = j.at("stats").get<RepoStats>();
    std::map<std::string, std::vector<CommitInfo>> history_of;
    for (const nlohmann::json& j : read_jsonl(config.out / "commit_history.jsonl"))
        history_of[j.at("repo").get<std::string>()] = j.at("commits")
                                                          .get<std::vector<CommitInfo>>();

    // valid comments with a definitive addressing label
    std::vector<const CommentContext*> rows;
    std::vector<std::vector<std::string>> corpus;
    for (const CommentContext& context : dataset) {
        const auto it = label_of.find(context.comment.id);
        if (it == label_of.end())
            continue;
        if (!is_valid_class(it->second) || it->second == SixClass::ValidUncertain)
            continue;
        rows.push_back(&context);
        corpus.push_back(tokenize_comment(context.comment.body));
    }

    if (rows.empty()) {
        write_lines(config.out / "features.csv", {});
        write_json(config.out / "features_meta.json",
            nlohmann::json { { "rows", 0 },
                { "notice", "no valid comments with definitive labels; features skipped" } });
        return;
    }

    // guard against an all-empty token corpus
    bool any_tokens = false;
    for (const auto& doc : corpus)
        any_tokens = any_tokens || !doc.empty();
    if (!any_tokens)
        corpus.front().push_back("placeholder");
    const TopicModel topic_model = train_lda(corpus, 6, 0.0, 0.0, 1000, config.seed);
    {
        std::ofstream model_out(config.out / "topic_model.txt", std::ios::binary);
        topic_model.save(model_out);
    }

    // the four retained actions, watch-list order
    const std::vector<WatchedAction> watch_list = load_watch_list(config.watch_list);
    ActionRoster roster;
    std::set<std::string> present;
    for (const CommentContext* context : rows)
        if (context->source.kind != SourceKind::Human)
            present.insert(context->source.action);
    for (const WatchedAction& watched : watch_list)
        if (present.count(watched.name) && roster.actions.size() < 4)
            roster.actions.push_back(watched.name);

    std::vector<std::string> csv;
    std::string header = "comment_id,segment_path,label";
    for (const std::string& name : feature_names())
        header += "," + name;
    csv.push_back(header);

    std::vector<std::vector<double>> columns(kFeatureCount);
    for (const CommentContext* context : rows) {
        const auto stats_it = stats_of.find(context->repo.full());
        if (stats_it == stats_of.end())
            throw FeatureError("missing repo stats for " + context->repo.full());
        const auto history_it = history_of.find(context->repo.full());
        const std::vector<CommitInfo> empty_history;
        const FeatureVector features = extract_features(*context, stats_it->second,
            history_it != history_of.end() ? history_it->second : empty_history,
            topic_model, roster);
        const bool addressed = is_addressed(label_of.at(context->comment.id));
        std::string line = std::to_string(context->comment.id) + ","
            + csv_escape(context->segment_path.value_or("")) + ","
            + (addressed ? "Addressed" : "NotAddressed");
        for (std::size_t i = 0; i < kFeatureCount; ++i) {
            line += "," + fmt_double(features.values[i]);
            columns[i].push_back(features.values[i]);
        }
        csv.push_back(std::move(line));
    }
    write_lines(config.out / "features.csv", csv);

    nlohmann::json meta {
        { "rows", rows.size() },
        { "roster", roster.actions },
    };
    if (rows.size() >= 3) {
        const AutoSpearmanResult pruned = autospearman(columns, feature_names(), 0.7);
        nlohmann::json removed = nlohmann::json::array();
        for (const RemovedFeature& r : pruned.removed)
            removed.push_back({ { "name", r.name }, { "partner", r.partner },
                { "rho", r.rho } });
        write_json(config.out / "autospearman.json",
            nlohmann::json { { "retained", pruned.retained }, { "removed", removed } });
        meta["retained_features"] = pruned.retained.size();
    } else {
        write_json(config.out / "autospearman.json",
            nlohmann::json { { "retained", feature_names() },
                { "removed", nlohmann::json::array() } });
        meta["retained_features"] = feature_names().size();
    }
    write_json(config.out / "features_meta.json", meta);
}

// --- explain ---

namespace {

    struct FeatureMatrix {
        std::vector<std::int64_t> ids;
        std::vector<std::string> segment_paths;
        std::vector<int> labels; // 1 = Addressed
        std::vector<std::vector<double>> rows;
        std::vector<std::string> names;
    };

    FeatureMatrix read_features_csv(const std::filesystem::path& file)
    {
        std::ifstream in(file);
        if (!in)
            throw Error("missing stage artifact: " + file.string());
        FeatureMatrix matrix;
        std::string line;
        if (!std::getline(in, line))
            return matrix;
        // header: comment_id,segment_path,label,<names...>
        std::stringstream header(line);
        std::string field;
        for (int skip = 0; skip < 3; ++skip)
            std::getline(header, field, ',');
        while (std::getline(header, field, ','))
            matrix.names.push_back(field);
        while (std::getline(in, line)) {
            if (trim(line).empty())
                continue;
            // fields never contain commas except the quoted segment path
            std::vector<std::string> fields;
            std::string current;
            bool quoted = false;
            for (const char c : line) {
                if (c == '"')
                    quoted = !quoted;
                else if (c == ',' && !quoted) {
                    fields.push_back(current);
                    current.clear();
                } else
                    current.push_back(c);
            }
            fields.push_back(current);
            matrix.ids.push_back(std::stoll(fields.at(0)));
            matrix.segment_paths.push_back(fields.at(1));
            matrix.labels.push_back(fields.at(2) == "Addressed" ? 1 : 0);
            std::vector<double> row;
            for (std::size_t i = 3; i < fields.size(); ++i)
                row.push_back(std::stod(fields[i]));
            matrix.rows.push_back(std::move(row));
        }
        return matrix;
    }

} // namespace

void cmd_explain(const RunConfig& config)
{
    const FeatureMatrix matrix = read_features_csv(config.out / "features.csv");
    const nlohmann::json pruned = read_json(config.out / "autospearman.json");
    const std::set<std::string> retained(pruned.at("retained").begin(),
        pruned.at("retained").end());

    auto skip = [&](const std::string& reason) {
        write_json(config.out / "feature_report.json",
            nlohmann::json { { "skipped", true }, { "notice", reason } });
    };
    if (matrix.rows.size() < 5) {
        skip("model stage skipped: fewer than 5 labeled valid comments");
        return;
    }
    bool has_positive = false, has_negative = false;
    for (const int label : matrix.labels) {
        has_positive = has_positive || label == 1;
        has_negative = has_negative || label == 0;
    }
    if (!has_positive || !has_negative) {
        skip("model stage skipped: single-class labels");
        return;
    }

    // project to the AutoSpearman-retained columns
    std::vector<std::size_t> keep;
    std::vector<std::string> kept_names, kept_groups;
    const std::vector<std::string>& groups = feature_groups();
    for (std::size_t i = 0; i < matrix.names.size(); ++i)
        if (retained.count(matrix.names[i])) {
            keep.push_back(i);
            kept_names.push_back(matrix.names[i]);
            kept_groups.push_back(groups[i]);
        }
    std::vector<std::vector<double>> rows;
    for (const std::vector<double>& row : matrix.rows) {
        std::vector<double> projected;
        projected.reserve(keep.size());
        for (const std::size_t i : keep)
            projected.push_back(row[i]);
        rows.push_back(std::move(projected));
    }

    const TrainTestSplit split = split_train_test(matrix.labels, 0.8, config.seed);
    std::vector<std::vector<double>> train_rows, test_rows;
    std::vector<int> train_labels, test_labels;
    for (const std::size_t i : split.train) {
        train_rows.push_back(rows[i]);
        train_labels.push_back(matrix.labels[i]);
    }
    for (const std::size_t i : split.test) {
        test_rows.push_back(rows[i]);
        test_labels.push_back(matrix.labels[i]);
    }

    ForestParams params;
    params.n_trees = 100;
    params.seed = config.seed;
    const Forest forest = train_forest(train_rows, train_labels, params);
    {
        std::ofstream out(config.out / "forest.txt", std::ios::binary);
        forest.save(out);
    }

    std::vector<std::string> gold, pred;
    for (std::size_t i = 0; i < test_rows.size(); ++i) {
        gold.push_back(test_labels[i] ? "Addressed" : "NotAddressed");
        pred.push_back(forest.predict(test_rows[i]) >= 0.5 ? "Addressed" : "NotAddressed");
    }
    const auto test_confusion = confusion(gold, pred, { "NotAddressed", "Addressed" });
    const double accuracy = overall_accuracy(test_confusion);
    const double f1 = macro_f1(test_confusion);

    std::vector<ShapExplanation> explanations;
    std::vector<std::string> explanation_csv;
    std::string header = "instance_id";
    for (const std::string& name : kept_names)
        header += "," + name;
    explanation_csv.push_back(header);
    for (const std::size_t i : split.test) {
        const ShapExplanation explanation = tree_shap(forest, rows[i]);
        std::string line = std::to_string(matrix.ids[i]);
        for (const double phi : explanation.phi)
            line += "," + fmt_double(phi);
        explanation_csv.push_back(std::move(line));
        explanations.push_back(explanation);
    }
    write_lines(config.out / "explanations.csv", explanation_csv);

    const FeatureReport report = feature_report(explanations, test_rows, kept_names,
        kept_groups);
    nlohmann::json features = nlohmann::json::array();
    for (const FeatureStats& f : report.features)
        features.push_back({ { "name", f.name }, { "group", f.group },
            { "importance", f.importance }, { "directionality", f.directionality },
            { "constant", f.constant } });
    nlohmann::json group_rows = nlohmann::json::array();
    for (const GroupStats& g : report.groups)
        group_rows.push_back({ { "name", g.name }, { "sum_abs_phi", g.sum_abs_phi },
            { "mean_abs_phi", g.mean_abs_phi }, { "size", g.size } });
    write_json(config.out / "feature_report.json",
        nlohmann::json {
            { "skipped", false },
            { "accuracy", accuracy },
            { "macro_f1", f1 },
            { "test_size", test_rows.size() },
            { "train_size", train_rows.size() },
            { "params", { { "n_trees", params.n_trees }, { "max_depth", params.max_depth },
                            { "min_leaf", params.min_leaf },
                            { "features_per_split", "ceil(sqrt(d))" },
                            { "bootstrap", params.bootstrap }, { "seed", params.seed } } },
            { "features", features },
            { "groups", group_rows },
        });
}

// --- report ---

namespace {

    std::string action_or_human(const SourceKind kind, const std::string& action)
    {
        return kind == SourceKind::Human ? "Human" : action;
    }

    std::vector<CensusRow> read_census(const std::filesystem::path& file)
    {
        std::vector<CensusRow> census;
        for (const nlohmann::json& j : read_jsonl(file)) {
            CensusRow row;
            row.action = j.at("action").get<std::string>();
            row.repo = j.at("repo").get<std::string>();
            row.pr_count = j.value("pr_count", std::int64_t { 0 });
            row.prs_with_comments = j.value("prs_with_comments", std::int64_t { 0 });
            row.comment_count = j.value("comment_count", std::int64_t { 0 });
            census.push_back(std::move(row));
        }
        return census;
    }

    std::optional<double> fisher_or_none(const RateCell& a, const RateCell& b)
    {
        if (a.count == 0 || b.count == 0)
            return std::nullopt;
        return fisher_exact({ a.addressed, a.count - a.addressed, b.addressed,
            b.count - b.addressed });
    }

} // namespace

ReportBundle cmd_report(const RunConfig& config)
{
    ReportBundle bundle;
    const std::vector<WatchedAction> watch_list = load_watch_list(config.watch_list);

    // adoption (Table IV shape)
    if (std::filesystem::exists(config.out / "census.jsonl"))
        bundle.adoption = summarize_adoption(read_census(config.out / "census.jsonl"),
            watch_list, config.maturity_threshold);

    // dataset-driven tables
    std::vector<CommentContext> dataset;
    if (std::filesystem::exists(config.out / "dataset.jsonl"))
        for (const nlohmann::json& j : read_jsonl(config.out / "dataset.jsonl"))
            dataset.push_back(j.get<CommentContext>());

    std::map<std::string, SubsequentDistributionRow> subsequent_rows;
    std::vector<std::string> subsequent_order;
    for (const CommentContext& context : dataset) {
        const std::string source = action_or_human(context.source.kind, context.source.action);
        if (!subsequent_rows.count(source))
            subsequent_order.push_back(source);
        SubsequentDistributionRow& row = subsequent_rows[source];
        row.source = source;
        ++row.total;
        ++row.counts[context.subsequent.category];
    }
    std::stable_sort(subsequent_order.begin(), subsequent_order.end(),
        [](const std::string& a, const std::string& b) {
            // humans last, actions alphabetical
            const bool ha = a == "Human", hb = b == "Human";
            return ha != hb ? hb : a < b;
        });
    for (const std::string& source : subsequent_order)
        bundle.subsequent_distribution.push_back(subsequent_rows[source]);

    // evaluation (Table VII shape)
    if (std::filesystem::exists(config.out / "evaluation.json")) {
        const nlohmann::json evaluation = read_json(config.out / "evaluation.json");
        for (const nlohmann::json& row : evaluation.at("rows")) {
            EvaluationMetrics m;
            m.source = row.at("source").get<std::string>();
            m.n = row.value("n", std::int64_t { 0 });
            m.oa_full6 = row.value("oa_full6", 0.0);
            m.kappa_full6 = row.value("kappa_full6", 0.0);
            m.oa_stage1 = row.value("oa_stage1", 0.0);
            m.kappa_stage1 = row.value("kappa_stage1", 0.0);
            m.oa_stage2 = row.value("oa_stage2", 0.0);
            m.kappa_stage2 = row.value("kappa_stage2", 0.0);
            bundle.evaluation.push_back(std::move(m));
        }
    }

    // label distribution by source
    std::vector<LabelRecord> labels;
    if (std::filesystem::exists(config.out / "labels.jsonl"))
        labels = read_labels(config.out / "labels.jsonl");
    std::map<std::string, LabelDistributionRow> label_rows;
    std::vector<std::string> label_order;
    for (const LabelRecord& record : labels) {
        const std::string source = action_or_human(record.kind, record.action);
        if (!label_rows.count(source))
            label_order.push_back(source);
        LabelDistributionRow& row = label_rows[source];
        row.source = source;
        ++row.total;
        ++row.counts[record.final];
    }
    std::stable_sort(label_order.begin(), label_order.end(),
        [](const std::string& a, const std::string& b) {
            const bool ha = a == "Human", hb = b == "Human";
            return ha != hb ? hb : a < b;
        });
    for (const std::string& source : label_order)
        bundle.label_distribution.push_back(label_rows[source]);

    // rate comparisons + binned tables from the feature matrix
    if (std::filesystem::exists(config.out / "features.csv")) {
        const FeatureMatrix matrix = read_features_csv(config.out / "features.csv");
        if (!matrix.rows.empty()) {
            auto column = [&](const std::string& name) {
                const auto it = std::find(matrix.names.begin(), matrix.names.end(), name);
                if (it == matrix.names.end())
                    throw Error("feature column missing: " + name);
                return static_cast<std::size_t>(it - matrix.names.begin());
            };
            const std::size_t is_human = column("Is_Human");
            const std::size_t trigger_auto = column("Trigger_auto");
            const std::size_t trigger_manual = column("Trigger_manual");
            const std::size_t llm_35 = column("LLM_GPT-3.5");
            const std::size_t llm_4 = column("LLM_GPT-4");
            const std::size_t code_ratio = column("Code_Text_Ratio");
            const std::size_t prior_commits = column("Author_Prior_Commits");
            const std::size_t action_cols[4] = { column("Action_ID-1"), column("Action_ID-2"),
                column("Action_ID-3"), column("Action_ID-4") };

            std::vector<std::string> roster;
            if (std::filesystem::exists(config.out / "features_meta.json")) {
                const nlohmann::json meta = read_json(config.out / "features_meta.json");
                if (meta.contains("roster"))
                    roster = meta["roster"].get<std::vector<std::string>>();
            }

            auto comparison_for = [&](const std::string& action, int action_index) {
                auto in_scope = [&](std::size_t i) {
                    if (matrix.rows[i][is_human] != 0.0)
                        return false;
                    if (action_index < 0)
                        return true;
                    return matrix.rows[i][action_cols[action_index]] != 0.0;
                };
                RateComparison trigger { action, "trigger", "Auto", "Manual", {}, {}, {} };
                RateComparison llm { action, "llm", "GPT-4", "GPT-3.5", {}, {}, {} };
                for (std::size_t i = 0; i < matrix.rows.size(); ++i) {
                    if (!in_scope(i))
                        continue;
                    const bool addressed = matrix.labels[i] == 1;
                    if (matrix.rows[i][trigger_auto] != 0.0) {
                        ++trigger.a.count;
                        trigger.a.addressed += addressed;
                    } else if (matrix.rows[i][trigger_manual] != 0.0) {
                        ++trigger.b.count;
                        trigger.b.addressed += addressed;
                    }
                    if (matrix.rows[i][llm_4] != 0.0) {
                        ++llm.a.count;
                        llm.a.addressed += addressed;
                    } else if (matrix.rows[i][llm_35] != 0.0) {
                        ++llm.b.count;
                        llm.b.addressed += addressed;
                    }
                }
                trigger.p_value = fisher_or_none(trigger.a, trigger.b);
                llm.p_value = fisher_or_none(llm.a, llm.b);
                bundle.rate_comparisons.push_back(std::move(trigger));
                bundle.rate_comparisons.push_back(std::move(llm));
            };
            comparison_for("Total", -1);
            for (std::size_t a = 0; a < roster.size() && a < 4; ++a)
                comparison_for(roster[a], static_cast<int>(a));

            auto binned = [&](std::size_t col) {
                std::vector<double> pooled;
                std::vector<RateRecord> records;
                for (std::size_t i = 0; i < matrix.rows.size(); ++i) {
                    const double value = matrix.rows[i][col];
                    pooled.push_back(value);
                    records.push_back({ matrix.rows[i][is_human] != 0.0 ? "Human"
                                                                        : "Actions",
                        value, matrix.labels[i] == 1 });
                }
                return rate_table(records, quantile_bins(pooled, 5));
            };
            bundle.code_ratio_table = binned(code_ratio);
            bundle.prior_commits_table = binned(prior_commits);
        }
    }

    // SHAP feature report (Table X shape)
    if (std::filesystem::exists(config.out / "feature_report.json")) {
        const nlohmann::json report = read_json(config.out / "feature_report.json");
        if (report.value("skipped", false)) {
            bundle.notices.push_back(report.value("notice", "model stage skipped"));
        } else {
            FeatureReport features;
            for (const nlohmann::json& f : report.at("features")) {
                FeatureStats stats;
                stats.name = f.at("name").get<std::string>();
                stats.group = f.at("group").get<std::string>();
                stats.importance = f.at("importance").get<double>();
                stats.directionality = f.at("directionality").get<double>();
                stats.constant = f.value("constant", false);
                features.features.push_back(std::move(stats));
            }
            for (const nlohmann::json& g : report.at("groups")) {
                GroupStats group;
                group.name = g.at("name").get<std::string>();
                group.sum_abs_phi = g.at("sum_abs_phi").get<double>();
                group.mean_abs_phi = g.at("mean_abs_phi").get<double>();
                group.size = g.at("size").get<std::size_t>();
                features.groups.push_back(std::move(group));
            }
            bundle.features = std::move(features);
            bundle.model_accuracy = report.value("accuracy", 0.0);
            bundle.model_macro_f1 = report.value("macro_f1", 0.0);
        }
    }

    if (std::filesystem::exists(config.out / "collect_notices.json")) {
        const nlohmann::json notices = read_json(config.out / "collect_notices.json");
        for (const nlohmann::json& notice : notices.at("notices"))
            bundle.notices.push_back(notice.get<std::string>());
    }
    if (std::filesystem::exists(config.out / "reconstruct_report.json")) {
        const nlohmann::json report = read_json(config.out / "reconstruct_report.json");
        const std::int64_t inconsistent = report.value("inconsistent", std::int64_t { 0 });
        if (inconsistent > 0)
            bundle.notices.push_back(std::to_string(inconsistent)
                + " comment(s) discarded as inconsistent during reconstruction");
        const std::int64_t unmatched = report.value("path_unmatched_segments",
            std::int64_t { 0 });
        if (unmatched > 0)
            bundle.notices.push_back(std::to_string(unmatched)
                + " general-comment segment(s) had unresolvable paths and were excluded");
    }

    bundle.provenance = nlohmann::json {
        { "seed", config.seed },
        { "runs", config.runs },
        { "maturity_threshold", config.maturity_threshold },
        { "fixture_mode", std::string(to_string(config.fixture_mode)) },
        { "stage1_backend", config.stage1_backend.name },
        { "stage2_backend", config.stage2_backend.name },
    };

    emit_report(bundle, config.out);
    return bundle;
}

// --- discover ---

std::vector<AdoptionRow> cmd_discover(const RunConfig& config)
{
    const std::vector<WatchedAction> watch_list = load_watch_list(config.watch_list);
    std::vector<CensusRow> census;
    if (config.census) {
        census = read_census(*config.census);
    } else {
        const std::shared_ptr<Session> session = open_configured_session(config);
        for (const std::string& repo_name : config.repos) {
            const RepoRef repo = RepoRef::parse(repo_name);
            const RepoCollection collection = collect_repo(*session, repo, watch_list, config);
            if (!collection.census.action.empty())
                census.push_back(collection.census);
        }
    }
    const std::vector<AdoptionRow> adoption = summarize_adoption(census, watch_list,
        config.maturity_threshold);

    std::vector<std::string> lines;
    for (const CensusRow& row : census)
        lines.push_back(nlohmann::json { { "action", row.action }, { "repo", row.repo },
            { "pr_count", row.pr_count }, { "prs_with_comments", row.prs_with_comments },
            { "comment_count", row.comment_count } }.dump());
    write_lines(config.out / "census.jsonl", lines);

    ReportBundle bundle;
    bundle.adoption = adoption;
    bundle.provenance = nlohmann::json {
        { "seed", config.seed },
        { "maturity_threshold", config.maturity_threshold },
    };
    emit_report(bundle, config.out);
    return adoption;
}

// --- pipeline ---

ReportBundle cmd_pipeline(const RunConfig& config)
{
    cmd_collect(config);
    cmd_filter(config);
    cmd_reconstruct(config);
    cmd_classify(config);
    if (config.golden_annotations)
        cmd_evaluate(config);
    cmd_features(config);
    cmd_explain(config);
    return cmd_report(config);
}

} // namespace reviewpulse
