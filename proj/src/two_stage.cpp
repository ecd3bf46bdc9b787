#include "reviewpulse/two_stage.hpp"

#include "reviewpulse/errors.hpp"
#include "reviewpulse/text_util.hpp"

namespace reviewpulse {

void ValidityResult::validate() const
{
    if (value == Validity::Valid && items.empty())
        throw BackendFormatError("Valid verdict requires at least one extracted item");
    if (value != Validity::Valid && !items.empty())
        throw BackendFormatError("None/General verdicts must not carry items");
}

namespace {

    constexpr int kFormatRetries = 2;

    ParsedPayload complete_with_retries(Backend& backend, std::string prompt,
        std::int64_t comment_id, int run_index)
    {
        for (int attempt = 0;; ++attempt) {
            const std::string response = backend.complete(prompt, comment_id, run_index);
            try {
                return parse_llm_payload(response);
            } catch (const BackendFormatError&) {
                if (attempt >= kFormatRetries)
                    throw;
                prompt += "\n\nRespond only with the JSON payload.";
            }
        }
    }

    std::string items_block(const std::vector<std::string>& items)
    {
        std::string out;
        for (const std::string& item : items) {
            out += "- " + item + "\n";
        }
        if (!out.empty())
            out.pop_back();
        return out;
    }

} // namespace

ValidityResult classify_validity(const CommentContext& context, Backend& backend,
    const PromptTemplate& prompt, int run_index)
{
    const std::string rendered = prompt.render({
        { "comment", context.effective_body() },
        { "reviewed_diff", context.reviewed_rendered() },
    });
    const ParsedPayload payload = complete_with_retries(backend, rendered, context.comment.id,
        run_index);
    ValidityResult result;
    result.value = validity_from_string(payload.label);
    if (result.value == Validity::Valid)
        result.items = payload.items;
    result.validate();
    return result;
}

Addressing classify_addressing(const CommentContext& context,
    const std::vector<std::string>& items, Backend& backend, const PromptTemplate& prompt,
    int run_index)
{
    const std::string rendered = prompt.render({
        { "comment", context.effective_body() },
        { "reviewed_diff", context.reviewed_rendered() },
        { "subsequent_diff", context.subsequent.rendered.empty()
                ? std::string(to_string(context.subsequent.category))
                : context.subsequent.rendered },
        { "items", items_block(items) },
    });
    const ParsedPayload payload = complete_with_retries(backend, rendered, context.comment.id,
        run_index);
    return addressing_from_string(payload.label);
}

std::vector<std::string> VoteResult::deciding_runs() const
{
    std::vector<std::string> names;
    if (stage2_runs) {
        for (const Addressing run : *stage2_runs)
            names.emplace_back(to_string(run));
    } else {
        for (const Validity run : stage1_runs)
            names.emplace_back(to_string(run));
    }
    return names;
}

VoteResult run_two_stage(const CommentContext& context, Backend& stage1, Backend& stage2,
    int runs, const PromptTemplate& stage1_prompt, const PromptTemplate& stage2_prompt)
{
    if (runs < 1)
        throw Error("run_two_stage: runs must be positive");

    VoteResult result;
    std::vector<ValidityResult> stage1_results;
    for (int run = 0; run < runs; ++run) {
        stage1_results.push_back(classify_validity(context, stage1, stage1_prompt, run));
        result.stage1_runs.push_back(stage1_results.back().value);
    }
    result.stage1_final = vote(result.stage1_runs);
    result.agreement = vote_agreement(result.stage1_runs, result.stage1_final);

    if (result.stage1_final != Validity::Valid) {
        result.final = six_class_of(result.stage1_final);
        return result;
    }
    for (const ValidityResult& r : stage1_results) {
        if (r.value == Validity::Valid) {
            result.items = r.items;
            break;
        }
    }

    // no subsequent modification: trivially not addressed, skip Stage-2
    if (context.subsequent.category == ChangeCategory::Unchanged) {
        result.short_circuited = true;
        result.stage2_final = Addressing::Unaddressed;
        result.final = SixClass::ValidUnaddressed;
        return result;
    }

    std::vector<Addressing> stage2_runs;
    for (int run = 0; run < runs; ++run)
        stage2_runs.push_back(classify_addressing(context, result.items, stage2,
            stage2_prompt, run));
    result.stage2_runs = stage2_runs;
    result.stage2_final = vote(stage2_runs);
    result.agreement = vote_agreement(stage2_runs, *result.stage2_final);
    result.final = six_class_of(*result.stage2_final);
    return result;
}

VoteResult run_two_stage(const CommentContext& context, Backend& stage1, Backend& stage2,
    int runs)
{
    return run_two_stage(context, stage1, stage2, runs, default_stage1_template(),
        default_stage2_template());
}

} // namespace reviewpulse
