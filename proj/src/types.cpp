#include "reviewpulse/types.hpp"

#include "reviewpulse/errors.hpp"
#include "reviewpulse/time_util.hpp"

#include <cctype>

namespace reviewpulse {

namespace {

    bool valid_identifier(std::string_view s)
    {
        if (s.empty())
            return false;
        for (const char c : s)
            if (std::isspace(static_cast<unsigned char>(c)) || c == '/')
                return false;
        return true;
    }

} // namespace

RepoRef RepoRef::parse(std::string_view full)
{
    const std::size_t slash = full.find('/');
    if (slash == std::string_view::npos)
        throw DecodeError("repository reference must be owner/name", std::string(full));
    RepoRef ref { std::string(full.substr(0, slash)), std::string(full.substr(slash + 1)) };
    if (!valid_identifier(ref.owner) || !valid_identifier(ref.name))
        throw DecodeError("repository owner and name must be nonempty without whitespace", std::string(full));
    return ref;
}

void PullRequestRecord::validate() const
{
    if (number <= 0)
        throw DecodeError("pull request number must be positive", std::to_string(number));
    if (merged) {
        if (!merge_commit)
            throw DecodeError("merged PR must carry a merge commit", std::to_string(number));
        if (!merged_at || *merged_at < created_at)
            throw DecodeError("merged_at must be at or after created_at", std::to_string(number));
    }
}

std::string_view to_string(CommentKind kind)
{
    return kind == CommentKind::Inline ? "inline" : "general";
}

CommentKind comment_kind_from_string(std::string_view text)
{
    if (text == "inline")
        return CommentKind::Inline;
    if (text == "general")
        return CommentKind::General;
    throw DecodeError("unknown comment kind", std::string(text));
}

void RawComment::validate() const
{
    if (kind == CommentKind::Inline && !inline_meta)
        throw DecodeError("inline comment requires inline metadata", std::to_string(id));
    if (inline_meta && inline_meta->original_start_line
        && *inline_meta->original_start_line > inline_meta->original_line)
        throw DecodeError("original_start_line must not exceed original_line", std::to_string(id));
}

std::string_view to_string(FileStatus status)
{
    switch (status) {
    case FileStatus::Added:
        return "added";
    case FileStatus::Modified:
        return "modified";
    case FileStatus::Removed:
        return "removed";
    case FileStatus::Renamed:
        return "renamed";
    }
    return "modified";
}

FileStatus file_status_from_string(std::string_view text)
{
    if (text == "added")
        return FileStatus::Added;
    if (text == "modified" || text == "changed")
        return FileStatus::Modified;
    if (text == "removed")
        return FileStatus::Removed;
    if (text == "renamed")
        return FileStatus::Renamed;
    throw DecodeError("unknown file status", std::string(text));
}

void to_json(nlohmann::json& j, const RepoRef& v)
{
    j = v.full();
}

void from_json(const nlohmann::json& j, RepoRef& v)
{
    v = RepoRef::parse(j.get<std::string>());
}

void to_json(nlohmann::json& j, const PullRequestRecord& v)
{
    j = nlohmann::json {
        { "number", v.number },
        { "merged", v.merged },
        { "base_commit", v.base_commit },
        { "created_at", format_rfc3339(v.created_at) },
    };
    if (v.merge_commit)
        j["merge_commit"] = *v.merge_commit;
    if (v.merged_at)
        j["merged_at"] = format_rfc3339(*v.merged_at);
}

void from_json(const nlohmann::json& j, PullRequestRecord& v)
{
    v.number = j.at("number").get<int>();
    v.merged = j.at("merged").get<bool>();
    v.base_commit = j.at("base_commit").get<std::string>();
    v.created_at = parse_rfc3339(j.at("created_at").get<std::string>());
    v.merge_commit.reset();
    v.merged_at.reset();
    if (j.contains("merge_commit") && !j["merge_commit"].is_null())
        v.merge_commit = j["merge_commit"].get<std::string>();
    if (j.contains("merged_at") && !j["merged_at"].is_null())
        v.merged_at = parse_rfc3339(j["merged_at"].get<std::string>());
    v.validate();
}

void to_json(nlohmann::json& j, const InlineMeta& v)
{
    j = nlohmann::json {
        { "path", v.path },
        { "original_commit_id", v.original_commit_id },
        { "original_line", v.original_line },
        { "diff_hunk", v.diff_hunk },
    };
    if (v.original_start_line)
        j["original_start_line"] = *v.original_start_line;
}

void from_json(const nlohmann::json& j, InlineMeta& v)
{
    v.path = j.at("path").get<std::string>();
    v.original_commit_id = j.at("original_commit_id").get<std::string>();
    v.original_line = j.at("original_line").get<int>();
    v.diff_hunk = j.at("diff_hunk").get<std::string>();
    v.original_start_line.reset();
    if (j.contains("original_start_line") && !j["original_start_line"].is_null())
        v.original_start_line = j["original_start_line"].get<int>();
}

void to_json(nlohmann::json& j, const RawComment& v)
{
    j = nlohmann::json {
        { "id", v.id },
        { "kind", std::string(to_string(v.kind)) },
        { "author_login", v.author_login },
        { "created_at", format_rfc3339(v.created_at) },
        { "body", v.body },
    };
    if (v.in_reply_to)
        j["in_reply_to"] = *v.in_reply_to;
    if (v.inline_meta)
        j["inline_meta"] = *v.inline_meta;
}

void from_json(const nlohmann::json& j, RawComment& v)
{
    v.id = j.at("id").get<std::int64_t>();
    v.kind = comment_kind_from_string(j.at("kind").get<std::string>());
    v.author_login = j.at("author_login").get<std::string>();
    v.created_at = parse_rfc3339(j.at("created_at").get<std::string>());
    v.body = j.at("body").get<std::string>();
    v.in_reply_to.reset();
    v.inline_meta.reset();
    if (j.contains("in_reply_to") && !j["in_reply_to"].is_null())
        v.in_reply_to = j["in_reply_to"].get<std::int64_t>();
    if (j.contains("inline_meta") && !j["inline_meta"].is_null())
        v.inline_meta = j["inline_meta"].get<InlineMeta>();
    v.validate();
}

void to_json(nlohmann::json& j, const CommitInfo& v)
{
    j = nlohmann::json {
        { "sha", v.sha },
        { "author_is_bot", v.author_is_bot },
        { "committed_at", format_rfc3339(v.committed_at) },
    };
    if (v.author_login)
        j["author_login"] = *v.author_login;
}

void from_json(const nlohmann::json& j, CommitInfo& v)
{
    v.sha = j.at("sha").get<std::string>();
    v.author_is_bot = j.at("author_is_bot").get<bool>();
    v.committed_at = parse_rfc3339(j.at("committed_at").get<std::string>());
    v.author_login.reset();
    if (j.contains("author_login") && !j["author_login"].is_null())
        v.author_login = j["author_login"].get<std::string>();
}

void to_json(nlohmann::json& j, const RepoStats& v)
{
    j = nlohmann::json {
        { "file_count", v.file_count },
        { "file_size", v.file_size },
        { "issue_count", v.issue_count },
        { "pr_count", v.pr_count },
        { "contributor_count", v.contributor_count },
    };
}

void from_json(const nlohmann::json& j, RepoStats& v)
{
    v.file_count = j.at("file_count").get<std::int64_t>();
    v.file_size = j.at("file_size").get<std::int64_t>();
    v.issue_count = j.at("issue_count").get<std::int64_t>();
    v.pr_count = j.at("pr_count").get<std::int64_t>();
    v.contributor_count = j.at("contributor_count").get<std::int64_t>();
}

void to_json(nlohmann::json& j, const FileDiff& v)
{
    j = nlohmann::json {
        { "path", v.path },
        { "status", std::string(to_string(v.status)) },
        { "patch", v.patch },
        { "additions", v.additions },
        { "deletions", v.deletions },
    };
    if (v.previous_path)
        j["previous_path"] = *v.previous_path;
}

void from_json(const nlohmann::json& j, FileDiff& v)
{
    v.path = j.at("path").get<std::string>();
    v.status = file_status_from_string(j.at("status").get<std::string>());
    v.patch = j.value("patch", std::string());
    v.additions = j.value("additions", std::int64_t { 0 });
    v.deletions = j.value("deletions", std::int64_t { 0 });
    v.previous_path.reset();
    if (j.contains("previous_path") && !j["previous_path"].is_null())
        v.previous_path = j["previous_path"].get<std::string>();
}

} // namespace reviewpulse
