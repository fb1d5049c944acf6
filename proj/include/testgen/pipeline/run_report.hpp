#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "testgen/model/model.hpp"
#include "testgen/pipeline/pipeline.hpp"

namespace testgen::pipeline {

struct TestEntry {
    std::string id;
    std::string status;
    std::map<std::string, int> attempts;  // phase -> repair attempts
    std::string path;                     // file written under the run directory
};

struct TargetReport {
    std::string target_id;
    std::vector<TestEntry> tests;
    double line_cov = 0.0;
    double branch_cov = 0.0;
    double method_cov = 0.0;
    // Filled by external mutation tooling, never computed here.
    std::optional<double> mutation_score;
};

struct RunReport {
    std::string run_id;
    std::string language;
    std::string model_id;
    std::vector<TargetReport> targets;

    std::string to_json_text() const;
    static RunReport from_json_text(const std::string& text);
};

struct RunOutput {
    RunReport report;
    std::vector<TargetRun> target_runs;  // index-aligned with report.targets
    model::Language language = model::Language::java;
};

RunReport assemble_report(const std::string& run_id, model::Language language,
                          const std::string& model_id, std::vector<TargetRun>& runs);

// Writes <out_dir>/run-<id>/ with report.json, per-target test sources and
// transcripts, and a mirrored test-source tree of passing tests. Rerunning
// with the same run id reproduces the directory byte for byte. Returns the
// report path. Throws IoError when the directory cannot be written.
std::string persist_run(const RunOutput& run, const std::string& out_dir);

}  // namespace testgen::pipeline
