#pragma once

#include "testgen/model/model.hpp"
#include "testgen/pipeline/adapter.hpp"

namespace testgen::pipeline {

// Shell-command toolchain binding. Placeholders in commands:
//   {files}    space-separated test file paths (relative to the sandbox)
//   {file}     single test file path (run command, invoked per test)
//   {sandbox}  absolute sandbox directory
// Commands run with the sandbox as working directory; exit status and output
// are mapped to structured diagnostics.
struct SubprocessConfig {
    std::string sandbox_dir;
    std::string compile_cmd;
    std::string run_cmd;
    std::string coverage_cmd;
    std::string coverage_file;             // produced by coverage_cmd
    std::string coverage_format = "xml";   // "xml" (line-hit XML) or "json"
    model::Language language = model::Language::java;
};

class SubprocessToolchainAdapter : public ToolchainAdapter {
public:
    explicit SubprocessToolchainAdapter(SubprocessConfig config);

    std::vector<Diagnostic> compile(const std::vector<TestFile>& tests) override;
    std::vector<RunResult> run(const std::vector<TestFile>& tests) override;
    CoverageReport coverage(const std::vector<TestFile>& tests) override;

private:
    void write_tests(const std::vector<TestFile>& tests);
    SubprocessConfig config_;
};

// javac-style "file:line: error: message" lines.
std::vector<Diagnostic> parse_javac_diagnostics(const std::string& output);

// pylint-style "file:line:col: E0001: message (symbol)" lines; the message id
// letter maps to the category (E/F error, W warning, C convention, R refactor).
std::vector<Diagnostic> parse_pylint_diagnostics(const std::string& output);

struct CommandResult {
    int exit_code = 0;
    std::string output;
};
CommandResult run_command(const std::string& command, const std::string& workdir);

}  // namespace testgen::pipeline
