#pragma once

#include <memory>
#include <string>
#include <vector>

#include "testgen/analysis/java_analysis.hpp"
#include "testgen/cli/config.hpp"
#include "testgen/model/model.hpp"
#include "testgen/pipeline/run_report.hpp"
#include "testgen/prompt/prompt.hpp"

namespace testgen::cli {

// Exit statuses shared by every command: 0 success, 2 configuration or input
// error, 3 toolchain/pipeline failure.
constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitToolchain = 3;

// Parses every source file of the given language under root.
model::CodeModel load_project(const std::string& root, model::Language language);
model::CodeModel load_project_mixed(const std::string& root);

// Preprocessing per target: scope, constructors, accessors, chains, mock plan
// for Java; module scope, imported constructors, few-shot examples for Python.
std::vector<prompt::FocalContext> build_contexts(const model::CodeModel& model,
                                                 model::Language language,
                                                 const analysis::AnalysisConfig& analysis_cfg,
                                                 const std::vector<std::string>& target_globs,
                                                 const std::string& fewshot_dir);

// Runs the full generation pipeline; fills `out` when non-null.
int cmd_generate(const RunConfig& config, pipeline::RunOutput* out = nullptr);

int cmd_naturalness(const std::vector<std::string>& suite_dirs, const std::string& project_root,
                    const std::string& out_path);

int cmd_report(const std::string& run_dir);

}  // namespace testgen::cli
