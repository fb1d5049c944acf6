#pragma once

#include <optional>
#include <string>
#include <vector>

#include "testgen/pipeline/coverage.hpp"
#include "testgen/pipeline/diagnostic.hpp"

namespace testgen::pipeline {

struct TestFile {
    std::string id;
    std::string path;  // relative to the sandbox directory
    std::string text;
};

struct RunResult {
    std::string id;
    bool passed = false;
    std::optional<Diagnostic> failure;
};

// Binds the pipeline to a compiler, test runner, and coverage tool. Adapters
// are hermetic per sandbox directory and map exit status to structured
// diagnostics. For Python the compile step runs the linter; only
// error-category findings come back as errors.
class ToolchainAdapter {
public:
    virtual ~ToolchainAdapter() = default;

    virtual std::vector<Diagnostic> compile(const std::vector<TestFile>& tests) = 0;
    virtual std::vector<RunResult> run(const std::vector<TestFile>& tests) = 0;
    virtual CoverageReport coverage(const std::vector<TestFile>& tests) = 0;
};

}  // namespace testgen::pipeline
