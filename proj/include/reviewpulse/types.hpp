#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace reviewpulse {

struct RepoRef {
    std::string owner;
    std::string name;

    static RepoRef parse(std::string_view full);
    std::string full() const { return owner + "/" + name; }

    friend bool operator==(const RepoRef&, const RepoRef&) = default;
    friend auto operator<=>(const RepoRef&, const RepoRef&) = default;
};

struct PullRequestRecord {
    int number = 0;
    bool merged = false;
    std::string base_commit;
    std::optional<std::string> merge_commit;
    std::int64_t created_at = 0;
    std::optional<std::int64_t> merged_at;

    void validate() const;
};

enum class CommentKind { Inline, General };

std::string_view to_string(CommentKind kind);
CommentKind comment_kind_from_string(std::string_view text);

struct InlineMeta {
    std::string path;
    std::string original_commit_id;
    std::optional<int> original_start_line;
    int original_line = 0;
    std::string diff_hunk;
};

struct RawComment {
    std::int64_t id = 0;
    CommentKind kind = CommentKind::Inline;
    std::string author_login;
    std::int64_t created_at = 0;
    std::string body;
    std::optional<std::int64_t> in_reply_to;
    std::optional<InlineMeta> inline_meta;

    void validate() const;
};

struct CommitInfo {
    std::string sha;
    std::optional<std::string> author_login; // absent for anonymous authors
    bool author_is_bot = false;
    std::int64_t committed_at = 0;
};

struct RepoStats {
    std::int64_t file_count = 0;
    std::int64_t file_size = 0;
    std::int64_t issue_count = 0;
    std::int64_t pr_count = 0;
    std::int64_t contributor_count = 0;
};

enum class FileStatus { Added, Modified, Removed, Renamed };

std::string_view to_string(FileStatus status);
FileStatus file_status_from_string(std::string_view text);

struct FileDiff {
    std::string path;
    FileStatus status = FileStatus::Modified;
    std::optional<std::string> previous_path; // set when renamed
    std::string patch;                        // unified diff body; may be empty
    std::int64_t additions = 0;
    std::int64_t deletions = 0;
};

void to_json(nlohmann::json& j, const RepoRef& v);
void from_json(const nlohmann::json& j, RepoRef& v);
void to_json(nlohmann::json& j, const PullRequestRecord& v);
void from_json(const nlohmann::json& j, PullRequestRecord& v);
void to_json(nlohmann::json& j, const InlineMeta& v);
void from_json(const nlohmann::json& j, InlineMeta& v);
void to_json(nlohmann::json& j, const RawComment& v);
void from_json(const nlohmann::json& j, RawComment& v);
void to_json(nlohmann::json& j, const CommitInfo& v);
void from_json(const nlohmann::json& j, CommitInfo& v);
void to_json(nlohmann::json& j, const RepoStats& v);
void from_json(const nlohmann::json& j, RepoStats& v);
void to_json(nlohmann::json& j, const FileDiff& v);
void from_json(const nlohmann::json& j, FileDiff& v);

} // namespace reviewpulse
