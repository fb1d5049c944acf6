#pragma once

#include <map>
#include <string>
#include <vector>

#include "testgen/naturalness/metrics.hpp"

namespace testgen::naturalness {

struct TestEntry {
    std::string name;
    NameScore name_score;
    TestVariableScores variable_scores;
};

struct FileReport {
    std::string path;
    model::Language language = model::Language::java;
    AssertionMetrics metrics;
    std::vector<TestEntry> tests;
};

struct Aggregates {
    int files = 0;
    int tests = 0;
    double mean_assertion_ratio = 0.0;
    double mean_pct_no_assertions = 0.0;
    double mean_pct_duplicate_assertions = 0.0;
    double mean_pct_null_assertions = 0.0;
    double mean_pct_exception_assertions = 0.0;
    double mean_name_score = 0.0;
    double mean_variable_score = 0.0;  // over tests with variables
    bool empty = true;
};

struct SuiteReport {
    std::string suite;
    std::vector<FileReport> files;
    std::vector<std::string> skipped;  // unparseable files
    Aggregates overall;
    std::map<std::string, Aggregates> per_language;
};

struct NaturalnessReport {
    std::vector<SuiteReport> suites;

    std::string to_json_text() const;
};

// Evaluates one already-parsed test file against the project model.
FileReport evaluate_file(const model::CodeUnit& test_file, const model::CodeModel& model);

// Walks each named suite directory (.java/.py files, sorted), computing
// per-file metrics and per-suite aggregates with per-language sub-reports.
NaturalnessReport naturalness_report(
    const std::vector<std::pair<std::string, std::string>>& suites,
    const model::CodeModel& project_model);

Aggregates aggregate(const std::vector<const FileReport*>& files);

}  // namespace testgen::naturalness
