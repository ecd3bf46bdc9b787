#include "reviewpulse/filters.hpp"

#include "reviewpulse/errors.hpp"
#include "reviewpulse/text_util.hpp"

#include <algorithm>

namespace reviewpulse {

std::string_view to_string(RemovalReason reason)
{
    switch (reason) {
    case RemovalReason::NotMerged:
        return "not_merged";
    case RemovalReason::PostMerge:
        return "post_merge";
    case RemovalReason::NonEnglish:
        return "non_english";
    case RemovalReason::NotFirstInThread:
        return "not_first_in_thread";
    case RemovalReason::BotAuthor:
        return "bot_author";
    case RemovalReason::UnsupportedContent:
        return "unsupported_content";
    }
    return "unsupported_content";
}

std::int64_t FilterReport::removed_total() const
{
    std::int64_t total = 0;
    for (const auto& [reason, count] : removed_by)
        total += count;
    return total;
}

void FilterReport::check_accounting() const
{
    if (input_count != retained_count + removed_total())
        throw Error("filter accounting violated: " + std::to_string(input_count)
            + " != " + std::to_string(retained_count) + " + "
            + std::to_string(removed_total()));
}

nlohmann::json FilterReport::to_json() const
{
    nlohmann::json removed = nlohmann::json::object();
    for (const auto& [reason, count] : removed_by)
        removed[std::string(to_string(reason))] = count;
    return { { "input_count", input_count }, { "retained_count", retained_count },
        { "removed_by", removed } };
}

std::pair<std::vector<RawComment>, FilterReport> filter_comments(
    const std::vector<RawComment>& comments,
    const std::map<int, PullRequestRecord>& prs,
    const std::map<std::int64_t, int>& comment_pr,
    const LanguageDetector& detector,
    CollectionMode mode)
{
    FilterReport report;
    report.input_count = static_cast<std::int64_t>(comments.size());
    std::vector<RawComment> retained;
    retained.reserve(comments.size());

    for (const RawComment& comment : comments) {
        const auto pr_number = comment_pr.find(comment.id);
        if (pr_number == comment_pr.end())
            throw Error("comment " + std::to_string(comment.id) + " has no PR mapping");
        const auto pr_it = prs.find(pr_number->second);
        if (pr_it == prs.end())
            throw Error("PR " + std::to_string(pr_number->second) + " missing from map");
        const PullRequestRecord& pr = pr_it->second;

        if (!pr.merged) {
            ++report.removed_by[RemovalReason::NotMerged];
            continue;
        }
        if (pr.merged_at && comment.created_at >= *pr.merged_at) {
            ++report.removed_by[RemovalReason::PostMerge];
            continue;
        }
        if (!detector(comment.body).english()) {
            ++report.removed_by[RemovalReason::NonEnglish];
            continue;
        }
        if (comment.in_reply_to) {
            ++report.removed_by[RemovalReason::NotFirstInThread];
            continue;
        }
        if (mode == CollectionMode::Human && contains_ci(comment.author_login, "bot")) {
            ++report.removed_by[RemovalReason::BotAuthor];
            continue;
        }
        retained.push_back(comment);
    }
    report.retained_count = static_cast<std::int64_t>(retained.size());
    report.check_accounting();
    return { std::move(retained), std::move(report) };
}

std::vector<CommentContext> build_dataset(
    const std::vector<RawComment>& retained,
    const std::map<std::int64_t, ReconstructionOutcome>& reconstructions,
    FilterReport& report)
{
    std::vector<CommentContext> dataset;
    std::int64_t inconsistent = 0;
    for (const RawComment& comment : retained) {
        const auto it = reconstructions.find(comment.id);
        if (it == reconstructions.end())
            throw Error("comment " + std::to_string(comment.id)
                + " lacks a reconstruction outcome");
        const ReconstructionOutcome& outcome = it->second;
        if (outcome.unsupported_content) {
            ++report.removed_by[RemovalReason::UnsupportedContent];
            --report.retained_count;
            continue;
        }
        if (!outcome.context) {
            ++inconsistent; // discarded, tracked outside the report
            continue;
        }
        dataset.push_back(*outcome.context);
    }
    std::stable_sort(dataset.begin(), dataset.end(),
        [](const CommentContext& a, const CommentContext& b) {
            return std::tie(a.repo.owner, a.repo.name, a.pr.number, a.comment.created_at,
                       a.comment.id)
                < std::tie(b.repo.owner, b.repo.name, b.pr.number, b.comment.created_at,
                    b.comment.id);
        });
    report.check_accounting();
    return dataset;
}

} // namespace reviewpulse
