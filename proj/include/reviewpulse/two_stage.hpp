#pragma once

#include "reviewpulse/backend.hpp"
#include "reviewpulse/errors.hpp"
#include "reviewpulse/labels.hpp"
#include "reviewpulse/reconstruct.hpp"

#include <optional>
#include <string>
#include <vector>

namespace reviewpulse {

// Majority vote with the conservative tie-break: among labels with the top
// count, the one ranking lowest in the claims-least-addressing order wins.
template <typename Label>
Label vote(const std::vector<Label>& runs)
{
    if (runs.empty())
        throw Error("vote: no runs");
    Label best = runs.front();
    std::size_t best_count = 0;
    for (const Label candidate : runs) {
        std::size_t count = 0;
        for (const Label run : runs)
            count += run == candidate;
        if (count > best_count
            || (count == best_count && conservative_rank(candidate) < conservative_rank(best))) {
            best = candidate;
            best_count = count;
        }
    }
    return best;
}

template <typename Label>
double vote_agreement(const std::vector<Label>& runs, Label final)
{
    std::size_t count = 0;
    for (const Label run : runs)
        count += run == final;
    return static_cast<double>(count) / static_cast<double>(runs.size());
}

struct ValidityResult {
    Validity value = Validity::None;
    std::vector<std::string> items; // nonempty iff Valid

    void validate() const;
};

// Stage-1 call: prompt from comment text + reviewed changes; parses the
// payload into label + items. Retries the format up to twice with a
// payload-only reminder appended.
ValidityResult classify_validity(const CommentContext& context, Backend& backend,
    const PromptTemplate& prompt, int run_index);

// Stage-2 call for Valid comments: prompt adds subsequent modifications and
// the extracted items.
Addressing classify_addressing(const CommentContext& context,
    const std::vector<std::string>& items, Backend& backend, const PromptTemplate& prompt,
    int run_index);

struct VoteResult {
    std::vector<Validity> stage1_runs;
    Validity stage1_final = Validity::None;
    std::vector<std::string> items; // from the first final-agreeing run
    std::optional<std::vector<Addressing>> stage2_runs;
    std::optional<Addressing> stage2_final;
    bool short_circuited = false; // Unchanged subsequent change skipped Stage-2
    SixClass final = SixClass::None;
    double agreement = 0.0; // of the deciding stage

    std::vector<std::string> deciding_runs() const; // label names of that stage
};

// The two-stage framework: Stage-1 voted across runs; non-Valid finals stop;
// Valid comments whose file never changed are Valid-Unaddressed without any
// Stage-2 call; otherwise Stage-2 votes across runs. Stage backends may
// differ.
VoteResult run_two_stage(const CommentContext& context, Backend& stage1, Backend& stage2,
    int runs, const PromptTemplate& stage1_prompt, const PromptTemplate& stage2_prompt);

VoteResult run_two_stage(const CommentContext& context, Backend& stage1, Backend& stage2,
    int runs);

} // namespace reviewpulse
