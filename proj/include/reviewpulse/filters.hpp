#pragma once

#include "reviewpulse/language.hpp"
#include "reviewpulse/reconstruct.hpp"
#include "reviewpulse/types.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace reviewpulse {

enum class RemovalReason {
    NotMerged,
    PostMerge,
    NonEnglish,
    NotFirstInThread,
    BotAuthor,
    UnsupportedContent,
};

std::string_view to_string(RemovalReason reason);

struct FilterReport {
    std::int64_t input_count = 0;
    std::int64_t retained_count = 0;
    std::map<RemovalReason, std::int64_t> removed_by;

    std::int64_t removed_total() const;
    void check_accounting() const; // input = retained + sum(removed)
    nlohmann::json to_json() const;
};

enum class CollectionMode { Action, Human };

// Dataset-refinement filters: merged-and-pre-merge, English, first in thread,
// and (human mode) no "bot" substring in the author login.
std::pair<std::vector<RawComment>, FilterReport> filter_comments(
    const std::vector<RawComment>& comments,
    const std::map<int, PullRequestRecord>& prs,
    const std::map<std::int64_t, int>& comment_pr, // comment id -> PR number
    const LanguageDetector& detector,
    CollectionMode mode);

// Per-comment reconstruction outcome feeding build_dataset.
struct ReconstructionOutcome {
    std::optional<CommentContext> context; // absent = inconsistent
    bool unsupported_content = false;
};

// Drops inconsistent reconstructions and orders the dataset by
// (repo, PR, created_at, id).
std::vector<CommentContext> build_dataset(
    const std::vector<RawComment>& retained,
    const std::map<std::int64_t, ReconstructionOutcome>& reconstructions,
    FilterReport& report);

} // namespace reviewpulse
