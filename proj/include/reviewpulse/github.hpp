#pragma once

#include "reviewpulse/session.hpp"
#include "reviewpulse/types.hpp"

#include <optional>
#include <string>
#include <vector>

namespace reviewpulse {

enum class PrQueryKind { InlineByActions, GeneralByActions };

// The exact search qualifier string for a query kind.
std::string search_query(const RepoRef& repo, PrQueryKind kind);

// Distinct PR numbers matching the query, all pages fetched.
std::vector<int> search_prs(Session& session, const RepoRef& repo, PrQueryKind kind);

// Total PR count of a repository (search total_count).
std::int64_t count_prs(Session& session, const RepoRef& repo);

std::int64_t count_issues(Session& session, const RepoRef& repo);

PullRequestRecord fetch_pr(Session& session, const RepoRef& repo, int number);

// Inline kind hits pulls/{n}/comments, general kind issues/{n}/comments.
// No author filtering here; that is a downstream concern.
std::vector<RawComment> fetch_comments(Session& session, const RepoRef& repo, int number,
    CommentKind kind);

// Decoded file text at a commit (default branch when ref is empty), or
// absent when the path does not exist there. Files over 1 MiB or with
// invalid UTF-8 raise UnsupportedContent.
std::optional<std::string> fetch_file_at(Session& session, const RepoRef& repo,
    const std::string& path, const std::string& ref = "");

// Per-file diffs with rename annotations via the compare endpoint.
std::vector<FileDiff> compare_commits(Session& session, const RepoRef& repo,
    const std::string& base, const std::string& head);

// The per-file diffs a single commit introduced.
std::vector<FileDiff> fetch_commit_files(Session& session, const RepoRef& repo,
    const std::string& sha);

struct WorkflowFile {
    std::string path;
    std::string content;
    std::string commit;
    std::int64_t committed_at = 0;
};

// One entry per commit touching the file, ascending by commit time, content
// included. The path must lie under .github/workflows/.
std::vector<WorkflowFile> fetch_workflow_history(Session& session, const RepoRef& repo,
    const std::string& path);

// Workflow files present at the default branch.
std::vector<std::string> list_workflow_files(Session& session, const RepoRef& repo);

// Commits of a pull request, ascending by commit time.
std::vector<CommitInfo> fetch_pr_commits(Session& session, const RepoRef& repo, int number);

// Default-branch commit history (newest first from the API, returned ascending).
std::vector<CommitInfo> fetch_commit_history(Session& session, const RepoRef& repo);

// Repository-level context: tree-derived file counts plus issue/PR/contributor
// tallies.
RepoStats fetch_repo_stats(Session& session, const RepoRef& repo, const std::string& ref);

} // namespace reviewpulse
