#include "testgen/pipeline/pipeline.hpp"

#include <algorithm>

#include "testgen/error.hpp"
#include "testgen/llm/sha256.hpp"
#include "testgen/pipeline/coverage.hpp"
#include "testgen/pipeline/sanitize.hpp"
#include "testgen/util/text.hpp"

namespace testgen::pipeline {

namespace {

bool is_static_phase(Phase p) {
    return p == Phase::parse || p == Phase::compile || p == Phase::lint;
}

// Python repair reacts only to parse errors and error-category lint findings.
std::vector<Diagnostic> actionable_static(const std::vector<Diagnostic>& diags,
                                          model::Language lang, const std::string& file_id) {
    std::vector<Diagnostic> out;
    for (const auto& d : diags) {
        if (!d.file.empty() && d.file != file_id) continue;
        if (!is_static_phase(d.phase)) continue;
        if (d.severity != Severity::error) continue;
        if (lang == model::Language::python && d.phase == Phase::lint && d.category != "error")
            continue;
        out.push_back(d);
    }
    return out;
}

std::string file_extension(model::Language lang) {
    return lang == model::Language::java ? ".java" : ".py";
}

}  // namespace

std::string safe_id(const std::string& id) {
    std::string out;
    for (char c : id) {
        if (std::isalnum(static_cast<unsigned char>(c)))
            out += c;
        else if (!out.empty() && out.back() != '_')
            out += '_';
    }
    while (!out.empty() && out.back() == '_') out.pop_back();
    return out.empty() ? "target" : out;
}

std::vector<TestFile> test_files_of(const std::vector<TestArtifact>& suite,
                                    model::Language language, bool passing_only) {
    std::vector<TestFile> out;
    for (const auto& a : suite) {
        if (passing_only && a.status() != ArtifactStatus::passing) continue;
        if (a.status() == ArtifactStatus::discarded) continue;
        out.push_back({a.id(), a.id() + file_extension(language), a.text()});
    }
    return out;
}

void repair_loop(TestArtifact& artifact, const prompt::FocalContext& ctx,
                 const prompt::PromptBundle& prior, llm::ChatGateway& gateway,
                 ToolchainAdapter& adapter, const BudgetConfig& budget,
                 const llm::SamplingConfig& sampling, const prompt::PromptConfig& pcfg,
                 std::vector<Exchange>* transcript) {
    (void)ctx;
    if (artifact.status() != ArtifactStatus::sanitized) return;
    model::Language lang = prior.language;
    bool statically_clean = false;

    auto reprompt = [&](const Diagnostic& d) {
        prompt::PromptBundle bundle = prompt::build_repair_prompt(prior, artifact.text(), d, pcfg);
        std::string prompt_text = prompt::render(bundle, pcfg);
        llm::Completion completion = gateway.complete(prompt_text, sampling);
        artifact.count_attempt(d.phase);
        artifact.record(d.phase, d.message, llm::sha256_hex(prompt_text));
        if (transcript)
            transcript->push_back({artifact.id() + "-repair-" + to_string(d.phase) + "-" +
                                       std::to_string(artifact.attempts(d.phase)),
                                   prompt_text, completion.text});
        try {
            artifact.set_text(sanitize(completion.text, lang));
        } catch (const UnsalvageableError& e) {
            // Keep the previous text; the same diagnostic will drive the next
            // attempt until the budget runs out.
            artifact.record(Phase::parse, e.what(), "");
        }
    };

    while (true) {
        auto files = std::vector<TestFile>{
            {artifact.id(), artifact.id() + file_extension(lang), artifact.text()}};
        auto static_errors = actionable_static(adapter.compile(files), lang, artifact.id());
        if (!static_errors.empty()) {
            const Diagnostic& d = static_errors.front();
            if (artifact.attempts(d.phase) >= budget.max_iters) {
                artifact.discard(d.phase, "static errors persist after " +
                                              std::to_string(budget.max_iters) + " attempts: " +
                                              d.message);
                return;
            }
            reprompt(d);
            continue;
        }
        if (!statically_clean) {
            artifact.advance(ArtifactStatus::compiling);
            statically_clean = true;
        }

        auto results = adapter.run(files);
        const RunResult* mine = nullptr;
        for (const auto& r : results)
            if (r.id == artifact.id()) mine = &r;
        if (mine && mine->passed) {
            artifact.advance(ArtifactStatus::passing);
            return;
        }
        Diagnostic d;
        if (mine && mine->failure) {
            d = *mine->failure;
        } else {
            d.phase = Phase::runtime;
            d.message = "test execution failed";
            d.file = artifact.id();
        }
        if (artifact.attempts(d.phase) >= budget.max_iters) {
            artifact.record(d.phase, d.message, "");
            artifact.advance(ArtifactStatus::failing);
            return;
        }
        reprompt(d);
    }
}

std::pair<std::vector<const TestArtifact*>, std::vector<const TestArtifact*>> split_outcomes(
    const std::vector<TestArtifact>& suite) {
    std::pair<std::vector<const TestArtifact*>, std::vector<const TestArtifact*>> out;
    for (const auto& a : suite) {
        if (a.status() == ArtifactStatus::passing) out.first.push_back(&a);
        else if (a.status() == ArtifactStatus::failing) out.second.push_back(&a);
    }
    return out;
}

int augment_coverage(const prompt::FocalContext& ctx, std::vector<TestArtifact>& suite,
                     llm::ChatGateway& gateway, ToolchainAdapter& adapter,
                     const BudgetConfig& budget, const llm::SamplingConfig& sampling,
                     const prompt::PromptConfig& pcfg, std::vector<Exchange>* transcript) {
    const model::CodeUnit* unit = ctx.focal_unit();
    if (!unit) return 0;
    model::Language lang = ctx.language();
    util::LineIndex lines(unit->source_text);
    int admitted = 0;
    size_t next_index = suite.size() + 1;
    std::string target = ctx.target_id();

    prompt::PromptBundle generation_like;  // focal slot carrier for repairs
    generation_like.language = lang;
    generation_like.target_id = target;

    for (int round = 1; round <= budget.max_rounds; ++round) {
        auto passing_files = test_files_of(suite, lang, true);
        CoverageReport report = adapter.coverage(passing_files);
        double cov = report.line_coverage(unit->path);
        if (cov >= budget.target_coverage) break;

        std::vector<std::pair<int, std::string>> uncovered;
        for (int ln : report.uncovered_lines(unit->path)) {
            if (ln >= 1 && ln <= lines.line_count())
                uncovered.emplace_back(ln, std::string(lines.line_text(ln)));
        }
        if (uncovered.empty()) break;

        prompt::PromptBundle bundle = prompt::build_coverage_prompt(ctx, uncovered, pcfg);
        std::string prompt_text = prompt::render(bundle, pcfg);
        llm::Completion completion = gateway.complete(prompt_text, sampling);

        std::string id = safe_id(target) + "_t" + std::to_string(next_index++);
        TestArtifact artifact(id, target, completion.text);
        artifact.record(Phase::compile, "coverage round " + std::to_string(round),
                        llm::sha256_hex(prompt_text));
        if (transcript) transcript->push_back({id + "-coverage", prompt_text, completion.text});

        bool progressed = false;
        try {
            artifact.set_text(sanitize(completion.text, lang));
            artifact.advance(ArtifactStatus::sanitized);
            repair_loop(artifact, ctx, bundle, gateway, adapter, budget, sampling, pcfg,
                        transcript);
        } catch (const UnsalvageableError& e) {
            artifact.discard(Phase::parse, e.what());
        }

        if (artifact.status() == ArtifactStatus::passing) {
            auto with_new = passing_files;
            with_new.push_back(
                {artifact.id(), artifact.id() + (lang == model::Language::java ? ".java" : ".py"),
                 artifact.text()});
            double new_cov = adapter.coverage(with_new).line_coverage(unit->path);
            if (new_cov > cov) {
                progressed = true;
                ++admitted;
            } else {
                artifact.discard(Phase::runtime, "admission rejected: no line-coverage increase");
            }
        }
        suite.push_back(std::move(artifact));
        if (!progressed) break;  // zero-progress round
    }
    return admitted;
}

TargetRun run_target(const prompt::FocalContext& ctx, llm::ChatGateway& gateway,
                     ToolchainAdapter& adapter, const BudgetConfig& budget,
                     const llm::SamplingConfig& sampling, const prompt::PromptConfig& pcfg) {
    TargetRun out;
    out.target_id = ctx.target_id();
    model::Language lang = ctx.language();

    prompt::PromptBundle bundle = prompt::build_generation_prompt(ctx, pcfg);
    std::string prompt_text = prompt::render(bundle, pcfg);
    llm::Completion completion = gateway.complete(prompt_text, sampling);

    std::string id = safe_id(out.target_id) + "_t1";
    TestArtifact artifact(id, out.target_id, completion.text);
    artifact.record(Phase::compile, "generation", llm::sha256_hex(prompt_text));
    out.exchanges.push_back({id + "-generation", prompt_text, completion.text});

    try {
        artifact.set_text(sanitize(completion.text, lang));
        artifact.advance(ArtifactStatus::sanitized);
        repair_loop(artifact, ctx, bundle, gateway, adapter, budget, sampling, pcfg,
                    &out.exchanges);
    } catch (const UnsalvageableError& e) {
        artifact.discard(Phase::parse, e.what());
    }
    out.artifacts.push_back(std::move(artifact));

    bool any_passing = out.artifacts.front().status() == ArtifactStatus::passing;
    if (any_passing) {
        out.admitted_by_augmentation = augment_coverage(ctx, out.artifacts, gateway, adapter,
                                                        budget, sampling, pcfg, &out.exchanges);
    }

    const model::CodeUnit* unit = ctx.focal_unit();
    if (unit) {
        CoverageReport final_report =
            adapter.coverage(test_files_of(out.artifacts, lang, true));
        out.line_cov = final_report.line_coverage(unit->path);
        out.branch_cov = final_report.branch_coverage(unit->path);
        out.method_cov = method_coverage_fraction(final_report, *unit);
    }
    return out;
}

}  // namespace testgen::pipeline
