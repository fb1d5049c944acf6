#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "testgen/analysis/java_analysis.hpp"
#include "testgen/analysis/python_analysis.hpp"
#include "testgen/pipeline/diagnostic.hpp"
#include "testgen/prompt/templates.hpp"

namespace testgen::prompt {

enum class PromptKind { generation, repair, coverage };

// Slot ids follow the template layout: a constructors, b accessors,
// c guidance, d focal code, e private call chains, f mocked fields/types,
// g constructor/static stubs, h API-call stubs, plus fewshot and feedback.
enum class Slot {
    fewshot,
    constructors_a,
    auxiliary_b,
    guidance_c,
    focal_d,
    call_chains_e,
    mock_decls_f,
    mock_ctor_static_g,
    mock_api_h,
    feedback
};

const char* slot_name(Slot s);

struct PromptBundle {
    PromptKind kind = PromptKind::generation;
    model::Language language = model::Language::java;
    std::string system_preamble;
    std::vector<std::pair<Slot, std::string>> sections;  // insertion-ordered
    std::string target_id;

    bool has(Slot s) const;
    const std::string* get(Slot s) const;
    void set(Slot s, std::string text);
    void remove(Slot s);
};

// Everything gathered for one generation target. Java targets carry the
// analysis products; Python targets carry the module plus few-shot examples.
struct FocalContext {
    std::optional<analysis::FocalTarget> focal;    // Java
    std::optional<analysis::ModuleTarget> module;  // Python
    const model::CodeModel* code_model = nullptr;

    std::vector<const model::Callable*> constructors;
    analysis::AccessorSet accessors;
    std::vector<analysis::CallChain> call_chains;
    std::optional<analysis::MockPlan> mock_plan;
    std::optional<analysis::TestSkeleton> skeleton;
    std::vector<analysis::ImportedConstructor> imported_constructors;
    std::vector<analysis::FewShotExample> fewshot;

    model::Language language() const {
        return module ? model::Language::python : model::Language::java;
    }
    std::string target_id() const {
        return focal ? focal->id() : (module ? module->id() : "");
    }
    const model::CodeUnit* focal_unit() const {
        if (module) return module->module;
        if (focal && focal->focal_class) return focal->focal_class->unit;
        return nullptr;
    }
};

struct PromptConfig {
    // chars/4 token estimate; 0 disables the budget.
    int token_budget = 0;
    const TemplateSet* templates = nullptr;  // null -> builtin
};

int estimate_tokens(std::string_view text);

// Throws BudgetExceededError only when slot d alone does not fit the budget.
PromptBundle build_generation_prompt(const FocalContext& ctx, const PromptConfig& cfg = {});

PromptBundle build_repair_prompt(const PromptBundle& prior, const std::string& failing_test,
                                 const pipeline::Diagnostic& diagnostic,
                                 const PromptConfig& cfg = {});

// Throws EmptyUncoveredError when the uncovered list is empty.
PromptBundle build_coverage_prompt(const FocalContext& ctx,
                                   const std::vector<std::pair<int, std::string>>& uncovered,
                                   const PromptConfig& cfg = {});

// Deterministic rendering; fixed section order: preamble, fewshot, a..h,
// feedback; absent slots produce no heading.
std::string render(const PromptBundle& bundle, const PromptConfig& cfg = {});

}  // namespace testgen::prompt
