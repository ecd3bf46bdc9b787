#include "reviewpulse/features.hpp"

#include "reviewpulse/errors.hpp"
#include "reviewpulse/text_util.hpp"

#include <algorithm>
#include <cmath>

namespace reviewpulse {

const std::vector<std::string>& feature_names()
{
    static const std::vector<std::string> names = {
        "Is_Human",
        "Is_File_Level_Action",
        "Action_ID-1",
        "Action_ID-2",
        "Action_ID-3",
        "Action_ID-4",
        "Trigger_auto",
        "Trigger_manual",
        "LLM_GPT-3.5",
        "LLM_GPT-4",
        "Repo_File_Count",
        "Repo_File_Size",
        "Repo_Issue_Count",
        "Repo_PR_Count",
        "Repo_Contributor_Count",
        "Author_Is_Bot",
        "Author_Is_Anon",
        "Author_Prior_Commits",
        "Commit_Changed_File",
        "Commit_Change",
        "Commit_Add",
        "Commit_Del",
        "Commit_Base_Lines",
        "File_Is_Code",
        "File_Depth",
        "File_Add",
        "File_Del",
        "File_Change",
        "File_Base_Lines",
        "Comment_Add",
        "Comment_Del",
        "Comment_Change",
        "Timeline_Index",
        "Prior_Comment_Len",
        "Inline_Code",
        "Multiline_Code",
        "Text_Length",
        "Code_Length",
        "Code_Text_Ratio",
        "LDA_Topic_0",
        "LDA_Topic_1",
        "LDA_Topic_2",
        "LDA_Topic_3",
        "LDA_Topic_4",
        "LDA_Topic_5",
    };
    return names;
}

const std::vector<std::string>& feature_groups()
{
    static const std::vector<std::string> groups = [] {
        std::vector<std::string> g;
        for (int i = 0; i < 10; ++i)
            g.emplace_back("Source");
        for (int i = 0; i < 5; ++i)
            g.emplace_back("Repository");
        for (int i = 0; i < 17; ++i)
            g.emplace_back("Modification");
        for (int i = 0; i < 13; ++i)
            g.emplace_back("Comment");
        return g;
    }();
    return groups;
}

void FeatureVector::validate() const
{
    auto at = [&](FeatureId id) { return values[static_cast<std::size_t>(id)]; };
    auto check_onehot = [&](std::initializer_list<FeatureId> group, const char* name) {
        double sum = 0.0;
        for (const FeatureId id : group) {
            const double v = at(id);
            if (v != 0.0 && v != 1.0)
                throw FeatureError(std::string(name) + " one-hot values must be 0 or 1");
            sum += v;
        }
        if (sum > 1.0)
            throw FeatureError(std::string(name) + " one-hot group exceeds 1");
    };
    check_onehot({ FeatureId::Action1, FeatureId::Action2, FeatureId::Action3,
                     FeatureId::Action4 },
        "Action");
    check_onehot({ FeatureId::TriggerAuto, FeatureId::TriggerManual }, "Trigger");
    check_onehot({ FeatureId::LlmGpt35, FeatureId::LlmGpt4 }, "LLM");

    const double ratio = at(FeatureId::CodeTextRatio);
    if (ratio < 0.0 || ratio > 1.0)
        throw FeatureError("Code_Text_Ratio out of [0,1]");

    double simplex = 0.0;
    for (const FeatureId id : { FeatureId::LdaTopic0, FeatureId::LdaTopic1, FeatureId::LdaTopic2,
             FeatureId::LdaTopic3, FeatureId::LdaTopic4, FeatureId::LdaTopic5 })
        simplex += at(id);
    if (std::abs(simplex - 1.0) > 1e-9)
        throw FeatureError("LDA topic probabilities must sum to 1");

    for (const FeatureId id : { FeatureId::RepoFileCount, FeatureId::RepoFileSize,
             FeatureId::RepoIssueCount, FeatureId::RepoPrCount, FeatureId::RepoContributorCount,
             FeatureId::AuthorPriorCommits, FeatureId::CommitChangedFile, FeatureId::CommitAdd,
             FeatureId::CommitDel, FeatureId::CommitBaseLines, FeatureId::FileAdd,
             FeatureId::FileDel, FeatureId::FileBaseLines, FeatureId::CommentAdd,
             FeatureId::CommentDel, FeatureId::TextLength, FeatureId::CodeLength,
             FeatureId::PriorCommentLen, FeatureId::TimelineIndex })
        if (at(id) < 0.0)
            throw FeatureError("count feature below zero: " + std::to_string(static_cast<int>(id)));
}

int ActionRoster::index_of(const std::string& action) const
{
    for (std::size_t i = 0; i < actions.size(); ++i)
        if (actions[i] == action)
            return static_cast<int>(i);
    return -1;
}

LlmSeries llm_series_of(const std::string& model_value)
{
    const std::string lowered = to_lower_ascii(model_value);
    if (lowered.find("gpt-3.5") != std::string::npos
        || lowered.find("gpt-35") != std::string::npos
        || lowered.find("gpt3.5") != std::string::npos)
        return LlmSeries::Gpt35;
    if (lowered.find("gpt-4") != std::string::npos || lowered.find("gpt4") != std::string::npos)
        return LlmSeries::Gpt4;
    return LlmSeries::Unknown;
}

const std::map<std::string, std::string>& default_code_extensions()
{
    static const std::map<std::string, std::string> table = {
        { "c", "C" }, { "cc", "C++" }, { "cpp", "C++" }, { "cxx", "C++" }, { "h", "C" },
        { "hh", "C++" }, { "hpp", "C++" }, { "cs", "C#" }, { "java", "Java" },
        { "kt", "Kotlin" }, { "scala", "Scala" }, { "go", "Go" }, { "rs", "Rust" },
        { "py", "Python" }, { "rb", "Ruby" }, { "php", "PHP" }, { "pl", "Perl" },
        { "js", "JavaScript" }, { "jsx", "JavaScript" }, { "ts", "TypeScript" },
        { "tsx", "TypeScript" }, { "mjs", "JavaScript" }, { "vue", "Vue" },
        { "swift", "Swift" }, { "m", "Objective-C" }, { "mm", "Objective-C++" },
        { "sh", "Shell" }, { "bash", "Shell" }, { "zsh", "Shell" }, { "ps1", "PowerShell" },
        { "r", "R" }, { "jl", "Julia" }, { "lua", "Lua" }, { "sql", "SQL" },
        { "hs", "Haskell" }, { "ml", "OCaml" }, { "ex", "Elixir" }, { "exs", "Elixir" },
        { "erl", "Erlang" }, { "clj", "Clojure" }, { "dart", "Dart" }, { "groovy", "Groovy" },
        { "f90", "Fortran" }, { "asm", "Assembly" }, { "s", "Assembly" },
    };
    return table;
}

bool file_is_code(const std::string& path, const std::map<std::string, std::string>& table)
{
    const std::size_t dot = path.find_last_of('.');
    if (dot == std::string::npos || dot + 1 >= path.size())
        return false;
    const std::size_t slash = path.find_last_of('/');
    if (slash != std::string::npos && slash > dot)
        return false;
    return table.count(to_lower_ascii(path.substr(dot + 1))) > 0;
}

namespace {

    int path_depth(const std::string& path)
    {
        return static_cast<int>(std::count(path.begin(), path.end(), '/'));
    }

} // namespace

FeatureVector extract_features(const CommentContext& context,
    const RepoStats& repo_stats,
    const std::vector<CommitInfo>& commit_history,
    const TopicModel& topic_model,
    const ActionRoster& roster,
    const std::map<std::string, std::string>& code_extensions)
{
    if (topic_model.num_topics != 6)
        throw FeatureError("topic model must carry six topics, has "
            + std::to_string(topic_model.num_topics));

    FeatureVector features;
    const bool human = context.source.kind == SourceKind::Human;

    // Source
    features[FeatureId::IsHuman] = human ? 1.0 : 0.0;
    features[FeatureId::IsFileLevelAction] = context.source.kind == SourceKind::FileAction
        ? 1.0
        : 0.0;
    if (!human) {
        const int action = roster.index_of(context.source.action);
        if (action == 0)
            features[FeatureId::Action1] = 1.0;
        else if (action == 1)
            features[FeatureId::Action2] = 1.0;
        else if (action == 2)
            features[FeatureId::Action3] = 1.0;
        else if (action == 3)
            features[FeatureId::Action4] = 1.0;
        if (context.trigger) {
            if (*context.trigger == TriggerMode::Auto)
                features[FeatureId::TriggerAuto] = 1.0;
            else
                features[FeatureId::TriggerManual] = 1.0;
        }
        const LlmSeries series = context.llm_model ? llm_series_of(*context.llm_model)
                                                   : LlmSeries::Unknown;
        if (series == LlmSeries::Gpt35)
            features[FeatureId::LlmGpt35] = 1.0;
        else if (series == LlmSeries::Gpt4)
            features[FeatureId::LlmGpt4] = 1.0;
    }

    // Repository
    features[FeatureId::RepoFileCount] = static_cast<double>(repo_stats.file_count);
    features[FeatureId::RepoFileSize] = static_cast<double>(repo_stats.file_size);
    features[FeatureId::RepoIssueCount] = static_cast<double>(repo_stats.issue_count);
    features[FeatureId::RepoPrCount] = static_cast<double>(repo_stats.pr_count);
    features[FeatureId::RepoContributorCount] = static_cast<double>(repo_stats.contributor_count);

    // Modification
    if (!context.modification)
        throw FeatureError("comment " + std::to_string(context.comment.id)
            + " lacks modification stats");
    const ModificationStats& mod = *context.modification;
    features[FeatureId::AuthorIsBot] = mod.author_is_bot ? 1.0 : 0.0;
    features[FeatureId::AuthorIsAnon] = mod.author_is_anon ? 1.0 : 0.0;
    if (!mod.author_is_bot && !mod.author_is_anon && mod.author_login) {
        // commits by the same login strictly before the reviewed commit
        const std::string reviewed_commit = context.reviewed.empty()
            ? std::string()
            : context.reviewed.front().reviewed_commit;
        std::int64_t reviewed_time = context.comment.created_at;
        for (const CommitInfo& commit : commit_history)
            if (commit.sha == reviewed_commit)
                reviewed_time = commit.committed_at;
        std::int64_t prior = 0;
        for (const CommitInfo& commit : commit_history)
            if (commit.author_login == mod.author_login
                && commit.committed_at < reviewed_time)
                ++prior;
        features[FeatureId::AuthorPriorCommits] = static_cast<double>(prior);
    }
    features[FeatureId::CommitChangedFile] = static_cast<double>(mod.commit_changed_files);
    features[FeatureId::CommitAdd] = static_cast<double>(mod.commit_add);
    features[FeatureId::CommitDel] = static_cast<double>(mod.commit_del);
    features[FeatureId::CommitChange] = static_cast<double>(mod.commit_add + mod.commit_del);
    features[FeatureId::CommitBaseLines] = static_cast<double>(mod.commit_base_lines);
    const std::string& path = context.subsequent.original_path;
    features[FeatureId::FileIsCode] = file_is_code(path, code_extensions) ? 1.0 : 0.0;
    features[FeatureId::FileDepth] = static_cast<double>(path_depth(path));
    features[FeatureId::FileAdd] = static_cast<double>(mod.file_add);
    features[FeatureId::FileDel] = static_cast<double>(mod.file_del);
    features[FeatureId::FileChange] = static_cast<double>(mod.file_add + mod.file_del);
    features[FeatureId::FileBaseLines] = static_cast<double>(mod.file_base_lines);
    features[FeatureId::CommentAdd] = static_cast<double>(mod.comment_add);
    features[FeatureId::CommentDel] = static_cast<double>(mod.comment_del);
    features[FeatureId::CommentChange] = static_cast<double>(mod.comment_add + mod.comment_del);

    // Comment
    features[FeatureId::TimelineIndex] = static_cast<double>(context.timeline_index);
    features[FeatureId::PriorCommentLen] = static_cast<double>(context.prior_comment_chars);
    const CodeSpans spans = extract_code_spans(context.comment.body);
    features[FeatureId::InlineCode] = spans.has_inline ? 1.0 : 0.0;
    features[FeatureId::MultilineCode] = spans.has_multiline ? 1.0 : 0.0;
    const double text_length = static_cast<double>(context.comment.body.size());
    features[FeatureId::TextLength] = text_length;
    features[FeatureId::CodeLength] = static_cast<double>(spans.code_chars);
    features[FeatureId::CodeTextRatio] = text_length > 0
        ? std::min(1.0, static_cast<double>(spans.code_chars) / text_length)
        : 0.0;
    const std::vector<double> topics = infer_topics(topic_model,
        tokenize_comment(context.comment.body));
    features[FeatureId::LdaTopic0] = topics[0];
    features[FeatureId::LdaTopic1] = topics[1];
    features[FeatureId::LdaTopic2] = topics[2];
    features[FeatureId::LdaTopic3] = topics[3];
    features[FeatureId::LdaTopic4] = topics[4];
    features[FeatureId::LdaTopic5] = topics[5];

    features.validate();
    return features;
}

} // namespace reviewpulse
