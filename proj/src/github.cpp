#include "reviewpulse/github.hpp"

#include "reviewpulse/errors.hpp"
#include "reviewpulse/text_util.hpp"
#include "reviewpulse/time_util.hpp"

#include <json.hpp>

#include <algorithm>
#include <set>

namespace reviewpulse {

namespace {

    constexpr std::size_t kPageSize = 100;
    constexpr std::size_t kMaxContentBytes = 1 << 20;

    nlohmann::json parse_body(const HttpResponse& response, const std::string& context)
    {
        try {
            return nlohmann::json::parse(response.body);
        } catch (const nlohmann::json::exception& e) {
            throw DecodeError(std::string("malformed payload: ") + e.what(), context);
        }
    }

    // GET with per_page/page looping until a short page arrives
    template <typename Fn>
    void for_each_page(Session& session, const std::string& path,
        std::map<std::string, std::string> query, Fn&& on_page)
    {
        query["per_page"] = std::to_string(kPageSize);
        for (std::size_t page = 1;; ++page) {
            query["page"] = std::to_string(page);
            const HttpResponse response = session.get(path, query);
            if (response.status == 404)
                throw PRNotFound("not found: " + path);
            if (response.status != 200)
                throw Error("unexpected status " + std::to_string(response.status)
                    + " for " + path);
            const nlohmann::json j = parse_body(response, path);
            const std::size_t count = on_page(j);
            if (count < kPageSize)
                return;
        }
    }

    bool login_is_bot(const nlohmann::json& user)
    {
        if (user.is_null())
            return false;
        if (user.value("type", "") == "Bot")
            return true;
        const std::string login = user.value("login", "");
        return login.size() > 5 && login.substr(login.size() - 5) == "[bot]";
    }

    RawComment decode_inline_comment(const nlohmann::json& j)
    {
        RawComment comment;
        try {
            comment.id = j.at("id").get<std::int64_t>();
            comment.kind = CommentKind::Inline;
            comment.author_login = j.at("user").at("login").get<std::string>();
            comment.created_at = parse_rfc3339(j.at("created_at").get<std::string>());
            comment.body = j.at("body").get<std::string>();
            if (j.contains("in_reply_to_id") && !j["in_reply_to_id"].is_null())
                comment.in_reply_to = j["in_reply_to_id"].get<std::int64_t>();
            InlineMeta meta;
            meta.path = j.at("path").get<std::string>();
            meta.original_commit_id = j.at("original_commit_id").get<std::string>();
            meta.original_line = j.contains("original_line") && !j["original_line"].is_null()
                ? j["original_line"].get<int>()
                : j.value("original_position", 0);
            if (j.contains("original_start_line") && !j["original_start_line"].is_null())
                meta.original_start_line = j["original_start_line"].get<int>();
            meta.diff_hunk = j.value("diff_hunk", "");
            comment.inline_meta = std::move(meta);
        } catch (const nlohmann::json::exception& e) {
            throw DecodeError(std::string("inline comment: ") + e.what(),
                std::to_string(j.value("id", std::int64_t { 0 })));
        }
        comment.validate();
        return comment;
    }

    RawComment decode_general_comment(const nlohmann::json& j)
    {
        RawComment comment;
        try {
            comment.id = j.at("id").get<std::int64_t>();
            comment.kind = CommentKind::General;
            comment.author_login = j.at("user").at("login").get<std::string>();
            comment.created_at = parse_rfc3339(j.at("created_at").get<std::string>());
            comment.body = j.at("body").get<std::string>();
        } catch (const nlohmann::json::exception& e) {
            throw DecodeError(std::string("general comment: ") + e.what(),
                std::to_string(j.value("id", std::int64_t { 0 })));
        }
        return comment;
    }

    CommitInfo decode_commit(const nlohmann::json& j)
    {
        CommitInfo info;
        info.sha = j.at("sha").get<std::string>();
        const auto& author = j.contains("author") ? j["author"] : nlohmann::json();
        if (author.is_object() && author.contains("login")) {
            info.author_login = author["login"].get<std::string>();
            info.author_is_bot = login_is_bot(author);
        }
        info.committed_at = parse_rfc3339(
            j.at("commit").at("committer").at("date").get<std::string>());
        return info;
    }

} // namespace

std::string search_query(const RepoRef& repo, PrQueryKind kind)
{
    const std::string base = "repo:" + repo.full();
    if (kind == PrQueryKind::InlineByActions)
        return base + " reviewed-by:github-actions[bot] is:pr";
    return base + " commenter:github-actions is:pr";
}

std::vector<int> search_prs(Session& session, const RepoRef& repo, PrQueryKind kind)
{
    std::set<int> numbers;
    for_each_page(session, "/search/issues", { { "q", search_query(repo, kind) } },
        [&](const nlohmann::json& j) {
            const auto& items = j.at("items");
            for (const auto& item : items)
                numbers.insert(item.at("number").get<int>());
            return items.size();
        });
    return { numbers.begin(), numbers.end() };
}

std::int64_t count_prs(Session& session, const RepoRef& repo)
{
    const HttpResponse response = session.get("/search/issues",
        { { "q", "repo:" + repo.full() + " is:pr" }, { "per_page", "1" } });
    if (response.status != 200)
        throw Error("pr count failed for " + repo.full());
    return parse_body(response, repo.full()).at("total_count").get<std::int64_t>();
}

std::int64_t count_issues(Session& session, const RepoRef& repo)
{
    const HttpResponse response = session.get("/search/issues",
        { { "q", "repo:" + repo.full() + " is:issue" }, { "per_page", "1" } });
    if (response.status != 200)
        throw Error("issue count failed for " + repo.full());
    return parse_body(response, repo.full()).at("total_count").get<std::int64_t>();
}

PullRequestRecord fetch_pr(Session& session, const RepoRef& repo, int number)
{
    const std::string path = "/repos/" + repo.full() + "/pulls/" + std::to_string(number);
    const HttpResponse response = session.get(path);
    if (response.status == 404)
        throw PRNotFound("pull request not found: " + path);
    const nlohmann::json j = parse_body(response, path);
    PullRequestRecord pr;
    try {
        pr.number = j.at("number").get<int>();
        pr.merged = j.contains("merged") && !j["merged"].is_null() && j["merged"].get<bool>();
        pr.base_commit = j.at("base").at("sha").get<std::string>();
        pr.created_at = parse_rfc3339(j.at("created_at").get<std::string>());
        if (j.contains("merge_commit_sha") && !j["merge_commit_sha"].is_null())
            pr.merge_commit = j["merge_commit_sha"].get<std::string>();
        if (j.contains("merged_at") && !j["merged_at"].is_null())
            pr.merged_at = parse_rfc3339(j["merged_at"].get<std::string>());
    } catch (const nlohmann::json::exception& e) {
        throw DecodeError(std::string("pull request: ") + e.what(), path);
    }
    pr.validate();
    return pr;
}

std::vector<RawComment> fetch_comments(Session& session, const RepoRef& repo, int number,
    CommentKind kind)
{
    const std::string path = kind == CommentKind::Inline
        ? "/repos/" + repo.full() + "/pulls/" + std::to_string(number) + "/comments"
        : "/repos/" + repo.full() + "/issues/" + std::to_string(number) + "/comments";
    std::vector<RawComment> comments;
    for_each_page(session, path, {}, [&](const nlohmann::json& j) {
        for (const auto& item : j)
            comments.push_back(kind == CommentKind::Inline ? decode_inline_comment(item)
                                                           : decode_general_comment(item));
        return j.size();
    });
    return comments;
}

std::optional<std::string> fetch_file_at(Session& session, const RepoRef& repo,
    const std::string& path, const std::string& ref)
{
    const std::string url = "/repos/" + repo.full() + "/contents/" + path;
    std::map<std::string, std::string> query;
    if (!ref.empty())
        query["ref"] = ref; // empty ref reads the default branch
    const HttpResponse response = session.get(url, query);
    if (response.status == 404)
        return std::nullopt;
    if (response.status != 200)
        throw Error("content fetch failed (" + std::to_string(response.status) + "): " + url);
    const nlohmann::json j = parse_body(response, url);
    if (j.value("type", "file") != "file")
        throw UnsupportedContent("not a file: " + path + "@" + ref);
    if (j.value("size", std::int64_t { 0 }) > static_cast<std::int64_t>(kMaxContentBytes))
        throw UnsupportedContent("file exceeds 1 MiB: " + path + "@" + ref);
    std::string content;
    if (j.value("encoding", "") == "base64")
        content = base64_decode(j.value("content", ""));
    else
        content = j.value("content", "");
    if (content.size() > kMaxContentBytes)
        throw UnsupportedContent("file exceeds 1 MiB: " + path + "@" + ref);
    if (!is_valid_utf8(content))
        throw UnsupportedContent("binary or non-UTF-8 content: " + path + "@" + ref);
    return content;
}

namespace {

    FileDiff decode_file_entry(const nlohmann::json& j)
    {
        FileDiff diff;
        diff.path = j.at("filename").get<std::string>();
        diff.status = file_status_from_string(j.at("status").get<std::string>());
        if (j.contains("previous_filename") && !j["previous_filename"].is_null())
            diff.previous_path = j["previous_filename"].get<std::string>();
        diff.patch = j.value("patch", "");
        diff.additions = j.value("additions", std::int64_t { 0 });
        diff.deletions = j.value("deletions", std::int64_t { 0 });
        return diff;
    }

} // namespace

std::vector<FileDiff> compare_commits(Session& session, const RepoRef& repo,
    const std::string& base, const std::string& head)
{
    if (base == head)
        return {};
    const std::string path = "/repos/" + repo.full() + "/compare/" + base + "..." + head;
    const HttpResponse response = session.get(path);
    if (response.status == 404)
        throw CompareError("unknown commit in compare: " + base + "..." + head);
    if (response.status != 200)
        throw CompareError("compare failed (" + std::to_string(response.status) + "): " + path);
    const nlohmann::json j = parse_body(response, path);
    std::vector<FileDiff> files;
    if (j.contains("files"))
        for (const auto& entry : j["files"])
            files.push_back(decode_file_entry(entry));
    return files;
}

std::vector<FileDiff> fetch_commit_files(Session& session, const RepoRef& repo,
    const std::string& sha)
{
    const std::string path = "/repos/" + repo.full() + "/commits/" + sha;
    const HttpResponse response = session.get(path);
    if (response.status == 404)
        throw CompareError("unknown commit: " + sha);
    const nlohmann::json j = parse_body(response, path);
    std::vector<FileDiff> files;
    if (j.contains("files"))
        for (const auto& entry : j["files"])
            files.push_back(decode_file_entry(entry));
    return files;
}

std::vector<WorkflowFile> fetch_workflow_history(Session& session, const RepoRef& repo,
    const std::string& path)
{
    if (path.rfind(".github/workflows/", 0) != 0)
        throw InvalidPath("workflow history restricted to .github/workflows/: " + path);
    std::vector<CommitInfo> commits;
    for_each_page(session, "/repos/" + repo.full() + "/commits", { { "path", path } },
        [&](const nlohmann::json& j) {
            for (const auto& item : j)
                commits.push_back(decode_commit(item));
            return j.size();
        });
    std::sort(commits.begin(), commits.end(), [](const CommitInfo& a, const CommitInfo& b) {
        return a.committed_at != b.committed_at ? a.committed_at < b.committed_at
                                                : a.sha < b.sha;
    });
    std::vector<WorkflowFile> history;
    for (const CommitInfo& commit : commits) {
        const std::optional<std::string> content = fetch_file_at(session, repo, path, commit.sha);
        if (!content)
            continue; // deleted at this commit
        history.push_back({ path, *content, commit.sha, commit.committed_at });
    }
    return history;
}

std::vector<std::string> list_workflow_files(Session& session, const RepoRef& repo)
{
    const std::string path = "/repos/" + repo.full() + "/contents/.github/workflows";
    const HttpResponse response = session.get(path);
    if (response.status == 404)
        return {};
    const nlohmann::json j = parse_body(response, path);
    std::vector<std::string> files;
    for (const auto& entry : j) {
        if (entry.value("type", "") != "file")
            continue;
        const std::string name = entry.at("path").get<std::string>();
        if (name.ends_with(".yml") || name.ends_with(".yaml"))
            files.push_back(name);
    }
    std::sort(files.begin(), files.end());
    return files;
}

std::vector<CommitInfo> fetch_pr_commits(Session& session, const RepoRef& repo, int number)
{
    std::vector<CommitInfo> commits;
    for_each_page(session,
        "/repos/" + repo.full() + "/pulls/" + std::to_string(number) + "/commits", {},
        [&](const nlohmann::json& j) {
            for (const auto& item : j)
                commits.push_back(decode_commit(item));
            return j.size();
        });
    std::sort(commits.begin(), commits.end(), [](const CommitInfo& a, const CommitInfo& b) {
        return a.committed_at != b.committed_at ? a.committed_at < b.committed_at
                                                : a.sha < b.sha;
    });
    return commits;
}

std::vector<CommitInfo> fetch_commit_history(Session& session, const RepoRef& repo)
{
    std::vector<CommitInfo> commits;
    for_each_page(session, "/repos/" + repo.full() + "/commits", {},
        [&](const nlohmann::json& j) {
            for (const auto& item : j)
                commits.push_back(decode_commit(item));
            return j.size();
        });
    std::sort(commits.begin(), commits.end(), [](const CommitInfo& a, const CommitInfo& b) {
        return a.committed_at != b.committed_at ? a.committed_at < b.committed_at
                                                : a.sha < b.sha;
    });
    return commits;
}

RepoStats fetch_repo_stats(Session& session, const RepoRef& repo, const std::string& ref)
{
    RepoStats stats;
    const std::string tree_path = "/repos/" + repo.full() + "/git/trees/" + ref;
    const HttpResponse tree = session.get(tree_path, { { "recursive", "1" } });
    if (tree.status == 200) {
        const nlohmann::json j = parse_body(tree, tree_path);
        for (const auto& entry : j.value("tree", nlohmann::json::array())) {
            if (entry.value("type", "") != "blob")
                continue;
            ++stats.file_count;
            stats.file_size += entry.value("size", std::int64_t { 0 });
        }
    }
    stats.issue_count = count_issues(session, repo);
    stats.pr_count = count_prs(session, repo);

    std::int64_t contributors = 0;
    for_each_page(session, "/repos/" + repo.full() + "/contributors", {},
        [&](const nlohmann::json& j) {
            for (const auto& user : j)
                if (!login_is_bot(user))
                    ++contributors;
            return j.size();
        });
    stats.contributor_count = contributors;
    return stats;
}

} // namespace reviewpulse
