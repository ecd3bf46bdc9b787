#pragma once

#include "reviewpulse/diff.hpp"
#include "reviewpulse/github.hpp"
#include "reviewpulse/hunk.hpp"
#include "reviewpulse/types.hpp"
#include "reviewpulse/workflow.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace reviewpulse {

enum class ChangeCategory { Modified, RenamedModified, RenamedOnly, Deleted, Unchanged };

std::string_view to_string(ChangeCategory category);
ChangeCategory change_category_from_string(std::string_view text);

// The cumulative post-review delta of a reviewed file, five-way categorized.
struct SubsequentChange {
    ChangeCategory category = ChangeCategory::Unchanged;
    std::string original_path;
    std::string final_path;
    std::vector<LineEdit> diff;
    std::string rendered; // unified-style rendering for prompts/reports

    void validate() const;
};

// Pure categorization given both file versions; final_text absent = deleted.
SubsequentChange categorize_subsequent(const std::string& original_path,
    const std::string& original_text,
    const std::string& final_path,
    const std::optional<std::string>& final_text);

// previous path -> final path map from compare rename annotations, chained
// transitively.
std::map<std::string, std::string> build_rename_map(const std::vector<FileDiff>& files);

// Fetches both versions (rename-resolved at merge_ref) and computes the
// line diff directly on contents, avoiding compare-endpoint rebase noise.
SubsequentChange subsequent_change(Session& session, const RepoRef& repo,
    const std::string& path, const std::string& reviewed_ref, const std::string& merge_ref,
    const std::map<std::string, std::string>& rename_map);

enum class SourceKind { FileAction, HunkAction, Human };

std::string_view to_string(SourceKind kind);
SourceKind source_kind_from_string(std::string_view text);

struct CommentSource {
    SourceKind kind = SourceKind::Human;
    std::string action; // watch-list name; empty for human comments
};

// Per-comment change-scope measurements consumed by the feature stage.
struct ModificationStats {
    std::int64_t commit_changed_files = 0;
    std::int64_t commit_add = 0;
    std::int64_t commit_del = 0;
    std::int64_t commit_base_lines = 0;
    std::int64_t file_add = 0;
    std::int64_t file_del = 0;
    std::int64_t file_base_lines = 0;
    std::int64_t comment_add = 0;
    std::int64_t comment_del = 0;
    std::optional<std::string> author_login;
    bool author_is_bot = false;
    bool author_is_anon = false;
};

// A review comment joined with its reconstructed reviewed change and the
// subsequent file change; the unit of classification.
struct CommentContext {
    RepoRef repo;
    RawComment comment;
    CommentSource source;
    std::vector<ReviewedChange> reviewed;
    SubsequentChange subsequent;
    PullRequestRecord pr;
    std::optional<TriggerMode> trigger;    // actions only
    std::optional<std::string> llm_model;  // raw configured value, actions only
    std::optional<ModificationStats> modification;
    std::int64_t timeline_index = 0;       // position among the PR's comments
    std::int64_t prior_comment_chars = 0;  // total length of earlier comments
    // general comments split by file: the segment this context covers
    std::optional<std::string> segment_path;
    std::optional<std::string> segment_text;

    void validate() const;
    std::string reviewed_rendered() const;
    // prompt text: the per-file segment when present, else the whole body
    const std::string& effective_body() const;
};

void to_json(nlohmann::json& j, const CommentContext& v);
void from_json(const nlohmann::json& j, CommentContext& v);

// File-level reconstruction: Strategy A is the per-commit file diff at
// original_commit_id, Strategy B the cumulative base-to-original compare.
// Returns the matching strategy's reviewed changes when the comment's
// diff_hunk matches as a contiguous diff-line subsequence of either,
// otherwise nullopt (inconsistent).
std::optional<std::vector<ReviewedChange>> reconstruct_file_level(Session& session,
    const RepoRef& repo, const RawComment& comment, const PullRequestRecord& pr);

// Whether needle's diff lines appear as a contiguous subsequence of any
// haystack hunk chain, after normalizing trailing whitespace.
bool hunk_matches_subset(const Hunk& needle, const std::vector<Hunk>& haystack);

// Splits a general (PR-level-posted) comment body into per-file segments;
// text before any path heading lands in "(preamble)".
std::vector<std::pair<std::string, std::string>> split_general_comment(const std::string& body);

// Latest commit with time <= created_at; ties take that commit.
CommitInfo nearest_preceding_commit(const std::vector<CommitInfo>& commits,
    std::int64_t created_at);

} // namespace reviewpulse
