#pragma once

#include <utility>
#include <vector>

#include "testgen/llm/gateway.hpp"
#include "testgen/pipeline/adapter.hpp"
#include "testgen/pipeline/artifact.hpp"
#include "testgen/prompt/prompt.hpp"

namespace testgen::pipeline {

struct BudgetConfig {
    int max_iters = 3;             // repair attempts per phase
    int max_rounds = 4;            // coverage-augmentation rounds
    double target_coverage = 0.8;  // line coverage of the focal unit
};

// Transcript of one gateway exchange, persisted alongside the tests.
struct Exchange {
    std::string label;
    std::string prompt;
    std::string completion;
};

struct TargetRun {
    std::string target_id;
    std::vector<TestArtifact> artifacts;
    std::vector<Exchange> exchanges;
    double line_cov = 0.0;
    double branch_cov = 0.0;
    double method_cov = 0.0;
    int admitted_by_augmentation = 0;
};

// Alternates static checks with targeted repair prompts, then does the same
// for runtime failures. Terminal status: passing, failing, or discarded;
// discarded only when static errors persist after the budget.
void repair_loop(TestArtifact& artifact, const prompt::FocalContext& ctx,
                 const prompt::PromptBundle& prior, llm::ChatGateway& gateway,
                 ToolchainAdapter& adapter, const BudgetConfig& budget,
                 const llm::SamplingConfig& sampling, const prompt::PromptConfig& pcfg,
                 std::vector<Exchange>* transcript);

// Partition of terminal artifacts; discarded ones belong to neither side.
std::pair<std::vector<const TestArtifact*>, std::vector<const TestArtifact*>> split_outcomes(
    const std::vector<TestArtifact>& suite);

// Measures coverage, prompts for tests against uncovered lines, and admits
// only tests that pass and strictly increase line coverage. Stops at the
// target, the round budget, or a zero-progress round. Returns the number of
// admitted tests; the suite only ever grows.
int augment_coverage(const prompt::FocalContext& ctx, std::vector<TestArtifact>& suite,
                     llm::ChatGateway& gateway, ToolchainAdapter& adapter,
                     const BudgetConfig& budget, const llm::SamplingConfig& sampling,
                     const prompt::PromptConfig& pcfg, std::vector<Exchange>* transcript);

// Full per-target flow: generation prompt, sanitize, repair loop, coverage
// augmentation, final coverage measurement.
TargetRun run_target(const prompt::FocalContext& ctx, llm::ChatGateway& gateway,
                     ToolchainAdapter& adapter, const BudgetConfig& budget,
                     const llm::SamplingConfig& sampling, const prompt::PromptConfig& pcfg);

// File-name-safe form of a target id.
std::string safe_id(const std::string& id);

std::vector<TestFile> test_files_of(const std::vector<TestArtifact>& suite,
                                    model::Language language, bool passing_only);

}  // namespace testgen::pipeline
