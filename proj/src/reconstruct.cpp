#include "reviewpulse/reconstruct.hpp"

#include "reviewpulse/errors.hpp"
#include "reviewpulse/text_util.hpp"
#include "reviewpulse/time_util.hpp"

#include <algorithm>
#include <cctype>

namespace reviewpulse {

std::string_view to_string(ChangeCategory category)
{
    switch (category) {
    case ChangeCategory::Modified:
        return "Modified";
    case ChangeCategory::RenamedModified:
        return "Renamed-Modified";
    case ChangeCategory::RenamedOnly:
        return "Renamed-Only";
    case ChangeCategory::Deleted:
        return "Deleted";
    case ChangeCategory::Unchanged:
        return "Unchanged";
    }
    return "Unchanged";
}

ChangeCategory change_category_from_string(std::string_view text)
{
    if (text == "Modified")
        return ChangeCategory::Modified;
    if (text == "Renamed-Modified")
        return ChangeCategory::RenamedModified;
    if (text == "Renamed-Only")
        return ChangeCategory::RenamedOnly;
    if (text == "Deleted")
        return ChangeCategory::Deleted;
    if (text == "Unchanged")
        return ChangeCategory::Unchanged;
    throw DecodeError("unknown change category", std::string(text));
}

void SubsequentChange::validate() const
{
    switch (category) {
    case ChangeCategory::Unchanged:
        if (!diff.empty() || final_path != original_path)
            throw Error("Unchanged requires an empty diff and the original path");
        break;
    case ChangeCategory::Deleted:
        if (!diff.empty())
            throw Error("Deleted requires an empty diff");
        break;
    case ChangeCategory::RenamedOnly:
        if (!diff.empty() || final_path == original_path)
            throw Error("Renamed-Only requires an empty diff and a new path");
        break;
    case ChangeCategory::RenamedModified:
        if (diff.empty() || final_path == original_path)
            throw Error("Renamed-Modified requires edits and a new path");
        break;
    case ChangeCategory::Modified:
        if (diff.empty() || final_path != original_path)
            throw Error("Modified requires edits under the original path");
        break;
    }
}

SubsequentChange categorize_subsequent(const std::string& original_path,
    const std::string& original_text,
    const std::string& final_path,
    const std::optional<std::string>& final_text)
{
    SubsequentChange change;
    change.original_path = original_path;
    change.final_path = final_path;
    if (!final_text) {
        change.category = ChangeCategory::Deleted;
        change.final_path = original_path;
        change.validate();
        return change;
    }
    change.diff = text_diff(original_text, *final_text);
    const bool renamed = final_path != original_path;
    if (change.diff.empty())
        change.category = renamed ? ChangeCategory::RenamedOnly : ChangeCategory::Unchanged;
    else
        change.category = renamed ? ChangeCategory::RenamedModified : ChangeCategory::Modified;
    if (!change.diff.empty())
        change.rendered = render_edits(original_text, change.diff);
    change.validate();
    return change;
}

std::map<std::string, std::string> build_rename_map(const std::vector<FileDiff>& files)
{
    std::map<std::string, std::string> renames;
    for (const FileDiff& file : files)
        if (file.status == FileStatus::Renamed && file.previous_path)
            renames[*file.previous_path] = file.path;
    // chain transitive renames a->b, b->c into a->c
    bool changed = true;
    while (changed) {
        changed = false;
        for (auto& [from, to] : renames) {
            const auto next = renames.find(to);
            if (next != renames.end() && next->second != to && next->first != from) {
                to = next->second;
                changed = true;
            }
        }
    }
    return renames;
}

SubsequentChange subsequent_change(Session& session, const RepoRef& repo,
    const std::string& path, const std::string& reviewed_ref, const std::string& merge_ref,
    const std::map<std::string, std::string>& rename_map)
{
    std::optional<std::string> original;
    try {
        original = fetch_file_at(session, repo, path, reviewed_ref);
    } catch (const UnsupportedContent&) {
        throw;
    } catch (const Error& e) {
        throw ReconstructionError("cannot fetch reviewed content for " + path + ": " + e.what());
    }
    if (!original)
        throw ReconstructionError("reviewed file missing at its own commit: " + path + "@"
            + reviewed_ref);

    const auto renamed = rename_map.find(path);
    const std::string final_path = renamed != rename_map.end() ? renamed->second : path;
    std::optional<std::string> final_text;
    try {
        final_text = fetch_file_at(session, repo, final_path, merge_ref);
    } catch (const UnsupportedContent&) {
        throw;
    } catch (const Error& e) {
        throw ReconstructionError("cannot fetch merged content for " + final_path + ": "
            + e.what());
    }
    return categorize_subsequent(path, *original, final_path, final_text);
}

std::string_view to_string(SourceKind kind)
{
    switch (kind) {
    case SourceKind::FileAction:
        return "file_action";
    case SourceKind::HunkAction:
        return "hunk_action";
    case SourceKind::Human:
        return "human";
    }
    return "human";
}

SourceKind source_kind_from_string(std::string_view text)
{
    if (text == "file_action")
        return SourceKind::FileAction;
    if (text == "hunk_action")
        return SourceKind::HunkAction;
    if (text == "human")
        return SourceKind::Human;
    throw DecodeError("unknown source kind", std::string(text));
}

void CommentContext::validate() const
{
    if ((source.kind == SourceKind::HunkAction || source.kind == SourceKind::Human)
        && reviewed.size() != 1)
        throw Error("hunk-action and human sources carry exactly one reviewed change (comment "
            + std::to_string(comment.id) + ")");
    if (source.kind != SourceKind::Human && source.action.empty())
        throw Error("action-sourced comment without an action name");
    subsequent.validate();
}

std::string CommentContext::reviewed_rendered() const
{
    std::string out;
    for (std::size_t i = 0; i < reviewed.size(); ++i) {
        if (i)
            out += "\n...\n";
        out += reviewed[i].render();
    }
    return out;
}

const std::string& CommentContext::effective_body() const
{
    return segment_text ? *segment_text : comment.body;
}

namespace {

    nlohmann::json reviewed_to_json(const ReviewedChange& change)
    {
        nlohmann::json lines = nlohmann::json::array();
        for (const HunkLine& line : change.lines)
            lines.push_back({ { "origin", std::string(1, origin_marker(line.origin)) },
                { "text", line.text }, { "old_line", line.old_line },
                { "new_line", line.new_line } });
        return { { "path", change.path }, { "reviewed_commit", change.reviewed_commit },
            { "start_line", change.start_line }, { "end_line", change.end_line },
            { "lines", lines } };
    }

    ReviewedChange reviewed_from_json(const nlohmann::json& j)
    {
        ReviewedChange change;
        change.path = j.at("path").get<std::string>();
        change.reviewed_commit = j.at("reviewed_commit").get<std::string>();
        change.start_line = j.at("start_line").get<int>();
        change.end_line = j.at("end_line").get<int>();
        for (const auto& line : j.at("lines")) {
            HunkLine hunk_line;
            const std::string origin = line.at("origin").get<std::string>();
            hunk_line.origin = origin == "+" ? LineOrigin::Added
                : origin == "-"              ? LineOrigin::Removed
                                             : LineOrigin::Context;
            hunk_line.text = line.at("text").get<std::string>();
            hunk_line.old_line = line.at("old_line").get<int>();
            hunk_line.new_line = line.at("new_line").get<int>();
            change.lines.push_back(std::move(hunk_line));
        }
        return change;
    }

    nlohmann::json edits_to_json(const std::vector<LineEdit>& edits)
    {
        nlohmann::json j = nlohmann::json::array();
        for (const LineEdit& edit : edits)
            j.push_back({ { "op", edit.op == EditOp::Insert ? "insert" : "delete" },
                { "line", edit.line }, { "text", edit.text } });
        return j;
    }

    std::vector<LineEdit> edits_from_json(const nlohmann::json& j)
    {
        std::vector<LineEdit> edits;
        for (const auto& entry : j)
            edits.push_back({ entry.at("op").get<std::string>() == "insert" ? EditOp::Insert
                                                                            : EditOp::Delete,
                entry.at("line").get<std::size_t>(), entry.at("text").get<std::string>() });
        return edits;
    }

} // namespace

void to_json(nlohmann::json& j, const CommentContext& v)
{
    j = nlohmann::json {
        { "repo", v.repo },
        { "comment", v.comment },
        { "source", { { "kind", std::string(to_string(v.source.kind)) },
                        { "action", v.source.action } } },
        { "subsequent",
            { { "category", std::string(to_string(v.subsequent.category)) },
                { "original_path", v.subsequent.original_path },
                { "final_path", v.subsequent.final_path },
                { "diff", edits_to_json(v.subsequent.diff) },
                { "rendered", v.subsequent.rendered } } },
        { "pr", v.pr },
        { "timeline_index", v.timeline_index },
        { "prior_comment_chars", v.prior_comment_chars },
    };
    nlohmann::json reviewed = nlohmann::json::array();
    for (const ReviewedChange& change : v.reviewed)
        reviewed.push_back(reviewed_to_json(change));
    j["reviewed"] = reviewed;
    if (v.trigger)
        j["trigger"] = std::string(to_string(*v.trigger));
    if (v.llm_model)
        j["llm_model"] = *v.llm_model;
    if (v.segment_path)
        j["segment_path"] = *v.segment_path;
    if (v.segment_text)
        j["segment_text"] = *v.segment_text;
    if (v.modification) {
        const ModificationStats& m = *v.modification;
        nlohmann::json mj {
            { "commit_changed_files", m.commit_changed_files },
            { "commit_add", m.commit_add },
            { "commit_del", m.commit_del },
            { "commit_base_lines", m.commit_base_lines },
            { "file_add", m.file_add },
            { "file_del", m.file_del },
            { "file_base_lines", m.file_base_lines },
            { "comment_add", m.comment_add },
            { "comment_del", m.comment_del },
            { "author_is_bot", m.author_is_bot },
            { "author_is_anon", m.author_is_anon },
        };
        if (m.author_login)
            mj["author_login"] = *m.author_login;
        j["modification"] = mj;
    }
}

void from_json(const nlohmann::json& j, CommentContext& v)
{
    v.repo = j.at("repo").get<RepoRef>();
    v.comment = j.at("comment").get<RawComment>();
    v.source.kind = source_kind_from_string(j.at("source").at("kind").get<std::string>());
    v.source.action = j.at("source").value("action", "");
    v.reviewed.clear();
    for (const auto& entry : j.at("reviewed"))
        v.reviewed.push_back(reviewed_from_json(entry));
    const auto& sub = j.at("subsequent");
    v.subsequent.category = change_category_from_string(sub.at("category").get<std::string>());
    v.subsequent.original_path = sub.at("original_path").get<std::string>();
    v.subsequent.final_path = sub.at("final_path").get<std::string>();
    v.subsequent.diff = edits_from_json(sub.at("diff"));
    v.subsequent.rendered = sub.value("rendered", "");
    v.pr = j.at("pr").get<PullRequestRecord>();
    v.timeline_index = j.value("timeline_index", std::int64_t { 0 });
    v.prior_comment_chars = j.value("prior_comment_chars", std::int64_t { 0 });
    v.trigger.reset();
    v.llm_model.reset();
    v.modification.reset();
    v.segment_path.reset();
    v.segment_text.reset();
    if (j.contains("trigger"))
        v.trigger = j["trigger"].get<std::string>() == "manual" ? TriggerMode::Manual
                                                                : TriggerMode::Auto;
    if (j.contains("llm_model"))
        v.llm_model = j["llm_model"].get<std::string>();
    if (j.contains("segment_path"))
        v.segment_path = j["segment_path"].get<std::string>();
    if (j.contains("segment_text"))
        v.segment_text = j["segment_text"].get<std::string>();
    if (j.contains("modification")) {
        const auto& mj = j["modification"];
        ModificationStats m;
        m.commit_changed_files = mj.value("commit_changed_files", std::int64_t { 0 });
        m.commit_add = mj.value("commit_add", std::int64_t { 0 });
        m.commit_del = mj.value("commit_del", std::int64_t { 0 });
        m.commit_base_lines = mj.value("commit_base_lines", std::int64_t { 0 });
        m.file_add = mj.value("file_add", std::int64_t { 0 });
        m.file_del = mj.value("file_del", std::int64_t { 0 });
        m.file_base_lines = mj.value("file_base_lines", std::int64_t { 0 });
        m.comment_add = mj.value("comment_add", std::int64_t { 0 });
        m.comment_del = mj.value("comment_del", std::int64_t { 0 });
        m.author_is_bot = mj.value("author_is_bot", false);
        m.author_is_anon = mj.value("author_is_anon", false);
        if (mj.contains("author_login"))
            m.author_login = mj["author_login"].get<std::string>();
        v.modification = m;
    }
    v.validate();
}

namespace {

    std::vector<std::string> normalized_diff_lines(const Hunk& hunk)
    {
        std::vector<std::string> lines;
        lines.reserve(hunk.lines.size());
        for (const HunkLine& line : hunk.lines)
            lines.push_back(origin_marker(line.origin) + rtrim(line.text));
        return lines;
    }

} // namespace

bool hunk_matches_subset(const Hunk& needle, const std::vector<Hunk>& haystack)
{
    const std::vector<std::string> pattern = normalized_diff_lines(needle);
    if (pattern.empty())
        return false;
    for (const Hunk& hunk : haystack) {
        const std::vector<std::string> lines = normalized_diff_lines(hunk);
        if (pattern.size() > lines.size())
            continue;
        for (std::size_t start = 0; start + pattern.size() <= lines.size(); ++start) {
            if (std::equal(pattern.begin(), pattern.end(), lines.begin() + static_cast<std::ptrdiff_t>(start)))
                return true;
        }
    }
    return false;
}

namespace {

    std::vector<ReviewedChange> changes_from_patch(const std::string& path,
        const std::string& commit, const std::string& patch)
    {
        std::vector<ReviewedChange> changes;
        for (const Hunk& hunk : parse_patch(patch)) {
            ReviewedChange change;
            change.path = path;
            change.reviewed_commit = commit;
            change.start_line = hunk.new_start;
            change.end_line = hunk.last_new_line();
            change.lines = hunk.lines;
            changes.push_back(std::move(change));
        }
        return changes;
    }

} // namespace

std::optional<std::vector<ReviewedChange>> reconstruct_file_level(Session& session,
    const RepoRef& repo, const RawComment& comment, const PullRequestRecord& pr)
{
    if (!comment.inline_meta)
        throw ReconstructionError("file-level reconstruction requires inline metadata (comment "
            + std::to_string(comment.id) + ")");
    const InlineMeta& meta = *comment.inline_meta;
    if (trim(meta.diff_hunk).empty())
        return std::nullopt;
    const Hunk needle = parse_hunk(meta.diff_hunk);

    // Strategy A: the file's diff introduced by the reviewed commit itself
    const std::vector<FileDiff> commit_files = fetch_commit_files(session, repo,
        meta.original_commit_id);
    for (const FileDiff& file : commit_files) {
        if (file.path != meta.path || file.patch.empty())
            continue;
        if (hunk_matches_subset(needle, parse_patch(file.patch)))
            return changes_from_patch(file.path, meta.original_commit_id, file.patch);
    }

    // Strategy B: cumulative base-to-reviewed compare
    const std::vector<FileDiff> compared = compare_commits(session, repo, pr.base_commit,
        meta.original_commit_id);
    for (const FileDiff& file : compared) {
        if (file.path != meta.path || file.patch.empty())
            continue;
        if (hunk_matches_subset(needle, parse_patch(file.patch)))
            return changes_from_patch(file.path, meta.original_commit_id, file.patch);
    }
    return std::nullopt; // inconsistent: discarded downstream
}

std::vector<std::pair<std::string, std::string>> split_general_comment(const std::string& body)
{
    const std::string normalized = normalize_lf(body);
    if (trim(normalized).empty())
        return {};
    const std::vector<std::string> lines = split_lines(normalized);

    auto path_heading = [](std::string_view line) -> std::optional<std::string> {
        std::string_view t = trim(line);
        // strip markdown heading/bold/code decorations
        while (!t.empty() && (t.front() == '#' || t.front() == '*' || t.front() == '`'))
            t.remove_prefix(1);
        while (!t.empty() && (t.back() == '*' || t.back() == '`' || t.back() == ':'))
            t.remove_suffix(1);
        t = trim(t);
        if (t.empty() || t.find(' ') != std::string_view::npos)
            return std::nullopt;
        // path-like: contains a slash or a dot-extension, made of path chars
        bool has_slash = false, has_dot = false;
        for (const char c : t) {
            if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '/' || c == '.'
                    || c == '_' || c == '-'))
                return std::nullopt;
            has_slash = has_slash || c == '/';
            has_dot = has_dot || c == '.';
        }
        if (!has_slash && !has_dot)
            return std::nullopt;
        if (t.find("..") != std::string_view::npos)
            return std::nullopt;
        return std::string(t);
    };

    std::vector<std::pair<std::string, std::string>> segments;
    std::string current_path = "(preamble)";
    std::string current_text;
    auto flush = [&]() {
        if (!trim(current_text).empty() || current_path != "(preamble)")
            segments.emplace_back(current_path, std::string(trim(current_text)));
        current_text.clear();
    };
    for (const std::string& line : lines) {
        if (const auto path = path_heading(line)) {
            flush();
            current_path = *path;
        } else {
            current_text += line;
            current_text.push_back('\n');
        }
    }
    flush();
    return segments;
}

CommitInfo nearest_preceding_commit(const std::vector<CommitInfo>& commits,
    std::int64_t created_at)
{
    const CommitInfo* best = nullptr;
    for (const CommitInfo& commit : commits)
        if (commit.committed_at <= created_at
            && (!best || commit.committed_at > best->committed_at))
            best = &commit;
    if (!best)
        throw ApproximationError("no commit precedes the comment (created "
            + format_rfc3339(created_at) + ")");
    return *best;
}

} // namespace reviewpulse
