#pragma once

#include <map>
#include <set>

#include "testgen/model/model.hpp"
#include "testgen/pipeline/adapter.hpp"

namespace testgen::pipeline {

// In-repo toolchain double driven by marker comments inside the test text:
//
//   // COMPILE-ERROR: message        compile diagnostic at the marker line
//   # LINT-ERROR: message            error-category lint finding (Python)
//   # LINT-WARNING: message          warning-category lint finding
//   // RUNTIME-FAIL: message         assertion failure at run time
//   // RUNTIME-ERROR: message        runtime error
//   // COVERS: path:3,7,9            lines this test covers when passing
//
// Tests that do not parse produce a parse diagnostic. Coverage is the union
// of COVERS markers of the given tests, intersected with the instrumentable
// lines of the registered project.
class FakeToolchainAdapter : public ToolchainAdapter {
public:
    explicit FakeToolchainAdapter(model::Language language) : language_(language) {}

    // Registers project files as the instrumentable-line universe.
    void register_project(const model::CodeModel& project);
    void register_file(const std::string& path, std::vector<int> lines);

    std::vector<Diagnostic> compile(const std::vector<TestFile>& tests) override;
    std::vector<RunResult> run(const std::vector<TestFile>& tests) override;
    CoverageReport coverage(const std::vector<TestFile>& tests) override;

private:
    model::Language language_;
    std::map<std::string, std::set<int>> instrumentable_;
};

}  // namespace testgen::pipeline
