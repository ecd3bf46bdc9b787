#pragma once

#include "reviewpulse/lda.hpp"
#include "reviewpulse/reconstruct.hpp"
#include "reviewpulse/types.hpp"

#include <array>
#include <map>
#include <string>
#include <vector>

namespace reviewpulse {

// The 45 features across the four dimensions, in canonical column order.
enum class FeatureId : int {
    // Source (10)
    IsHuman,
    IsFileLevelAction,
    Action1,
    Action2,
    Action3,
    Action4,
    TriggerAuto,
    TriggerManual,
    LlmGpt35,
    LlmGpt4,
    // Repository (5)
    RepoFileCount,
    RepoFileSize,
    RepoIssueCount,
    RepoPrCount,
    RepoContributorCount,
    // Modification (17)
    AuthorIsBot,
    AuthorIsAnon,
    AuthorPriorCommits,
    CommitChangedFile,
    CommitChange,
    CommitAdd,
    CommitDel,
    CommitBaseLines,
    FileIsCode,
    FileDepth,
    FileAdd,
    FileDel,
    FileChange,
    FileBaseLines,
    CommentAdd,
    CommentDel,
    CommentChange,
    // Comment (13)
    TimelineIndex,
    PriorCommentLen,
    InlineCode,
    MultilineCode,
    TextLength,
    CodeLength,
    CodeTextRatio,
    LdaTopic0,
    LdaTopic1,
    LdaTopic2,
    LdaTopic3,
    LdaTopic4,
    LdaTopic5,
};

constexpr std::size_t kFeatureCount = 45;

const std::vector<std::string>& feature_names();
const std::vector<std::string>& feature_groups(); // dimension of each column

struct FeatureVector {
    std::array<double, kFeatureCount> values {};

    double& operator[](FeatureId id) { return values[static_cast<std::size_t>(id)]; }
    double operator[](FeatureId id) const { return values[static_cast<std::size_t>(id)]; }

    void validate() const; // one-hot sums, ratio bounds, simplex, nonnegativity
};

// The four actions retained for addressing analysis, in Action_[1..4] order.
struct ActionRoster {
    std::vector<std::string> actions; // up to 4 watch-list names

    int index_of(const std::string& action) const; // -1 when absent
};

enum class LlmSeries { Unknown, Gpt35, Gpt4 };

// Maps a configured model value to the GPT-3.5/GPT-4 family.
LlmSeries llm_series_of(const std::string& model_value);

// Programming-file test via a shipped extension table.
bool file_is_code(const std::string& path, const std::map<std::string, std::string>& table);
const std::map<std::string, std::string>& default_code_extensions();

// All 45 fields per the table semantics. Author_Prior_Commits counts commits
// by the same login strictly before the reviewed commit and is 0 for bot or
// anonymous authors. Trigger and LLM one-hots are all-zero for humans.
FeatureVector extract_features(const CommentContext& context,
    const RepoStats& repo_stats,
    const std::vector<CommitInfo>& commit_history,
    const TopicModel& topic_model,
    const ActionRoster& roster,
    const std::map<std::string, std::string>& code_extensions = default_code_extensions());

} // namespace reviewpulse
