#pragma once

#include <string>
#include <vector>

#include "testgen/llm/gateway.hpp"

namespace testgen::cli {

// Declarative run configuration; a JSON file plus flag overrides (flags win).
// Secrets never live here, only the name of the environment variable.
struct RunConfig {
    std::string project_root = ".";
    std::string language = "java";
    std::vector<std::string> targets;  // class/module globs; empty = all

    llm::SamplingConfig sampling;

    std::string mock_allowlist_path;
    std::string service_entry_allowlist_path;
    int max_constructor_depth = 3;

    int max_iters = 3;
    int max_rounds = 4;
    double target_coverage = 0.8;

    std::string adapter_kind = "fake";  // "fake" | "subprocess"
    std::string compile_cmd;
    std::string run_cmd;
    std::string coverage_cmd;
    std::string coverage_file;
    std::string coverage_format = "xml";

    std::string output_dir = "out";
    std::string gateway_mode = "replay";  // "live" | "record" | "replay"
    std::string session_dir;
    std::string templates_dir;
    std::string fewshot_dir;
    int token_budget = 0;
    int workers = 2;
    std::string run_id = "run1";

    std::string to_json_text() const;
    static RunConfig from_json_text(const std::string& text);
    static RunConfig load_file(const std::string& path);

    // Throws ConfigError on contradictory or out-of-range settings.
    void validate() const;

    bool operator==(const RunConfig& other) const;
};

// Glob with '*' wildcards; used for the targets filter.
bool glob_match(const std::string& pattern, const std::string& value);

}  // namespace testgen::cli
