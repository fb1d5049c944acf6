#pragma once

#include <set>
#include <string>
#include <vector>

#include "testgen/model/model.hpp"

namespace testgen::naturalness {

// Per-file assertion-quality metrics. The duplicate/null/exception
// percentages are computed over tests that have at least one assertion.
struct AssertionMetrics {
    double assertion_ratio = 0.0;  // mean per-test assertion/statement ratio
    double pct_no_assertions = 0.0;
    double pct_duplicate_assertions = 0.0;
    double pct_null_assertions = 0.0;
    double pct_exception_assertions = 0.0;
    int test_count = 0;
    int tests_with_assertions = 0;
};

std::vector<const model::Callable*> find_test_methods(const model::CodeUnit& unit);

// Throws NotATestFileError when the unit declares no test methods.
AssertionMetrics assertion_metrics(const model::CodeUnit& test_file);

struct FocalCandidates {
    const model::TypeDecl* focal_class = nullptr;  // Java only
    std::vector<std::string> names;
    std::vector<const model::Callable*> callables;
};

// Java: focal class from the test-file name minus Test affixes, candidates
// from call sites matching its testable methods. Python: every called name.
FocalCandidates infer_focal_methods(const model::CodeUnit& test_file,
                                    const model::CodeModel& model);

struct NameScore {
    std::string test_id;
    bool focal_match = false;
    double token_closeness = 0.0;
    double total = 0.0;  // 0.5 * focal_match + 0.5 * token_closeness
    std::vector<std::string> residual_tokens;   // camel/underscore tokens + merges
    std::vector<std::string> exception_tokens;  // matched against thrown exceptions
};

NameScore test_name_score(const std::string& test_name,
                          const std::vector<std::string>& candidates,
                          const std::vector<std::string>& code_identifiers,
                          const std::vector<std::string>& thrown_exceptions);

struct VariableScore {
    std::string name;
    std::string declared_type;  // empty for Python
    bool data_structure_group = false;
    double score = 0.0;
};

struct TestVariableScores {
    std::vector<VariableScore> variables;
    double mean = 0.0;
    bool has_variables = false;
};

// Group A (data-structure types) is scored against the initializer-call
// context (callee name plus its formal parameter names); group B additionally
// matches the declared type name and its camel-case suffixes.
TestVariableScores variable_name_score(const model::Callable& test_method,
                                       const model::CodeModel& model);

// Exception type names referenced by throws/raises/catch forms in a body.
std::vector<std::string> thrown_exception_names(const model::Callable& test_method);

// Identifier pool: focal class/module declarations plus imports.
std::vector<std::string> identifier_pool(const model::CodeUnit& test_file,
                                         const FocalCandidates& candidates,
                                         const model::CodeModel& model);

bool is_assertion_line(std::string_view line, model::Language lang);

}  // namespace testgen::naturalness
