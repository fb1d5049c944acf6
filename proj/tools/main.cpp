#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "testgen/cli/commands.hpp"
#include "testgen/error.hpp"

using testgen::cli::RunConfig;

int main(int argc, char** argv) {
    CLI::App app{"LLM-assisted unit test generation guided by static analysis"};
    app.require_subcommand(1);

    // generate
    auto* gen = app.add_subcommand("generate", "generate tests for a project");
    std::string config_path;
    RunConfig cfg;
    std::string gateway_mode, session_dir, language, project_root, output_dir, run_id;
    std::vector<std::string> targets;
    int workers = -1;
    gen->add_option("--config", config_path, "JSON run configuration");
    gen->add_option("--project", project_root, "project root directory");
    gen->add_option("--language", language, "java or python");
    gen->add_option("--target", targets, "class/module glob filter (repeatable)");
    gen->add_option("--gateway", gateway_mode, "live, record, or replay");
    gen->add_option("--session", session_dir, "session directory for record/replay");
    gen->add_option("--out", output_dir, "output directory");
    gen->add_option("--run-id", run_id, "run identifier");
    gen->add_option("--workers", workers, "worker pool size");

    // naturalness
    auto* nat = app.add_subcommand("naturalness", "score test suites for naturalness");
    std::vector<std::string> suite_dirs;
    std::string nat_project, nat_out;
    nat->add_option("suites", suite_dirs, "test suite directories")->required();
    nat->add_option("--project", nat_project, "project root for focal resolution");
    nat->add_option("--out", nat_out, "report file ('-' for stdout)");

    // report
    auto* rep = app.add_subcommand("report", "summarize a run report");
    std::string run_dir;
    rep->add_option("run_dir", run_dir, "run directory or report.json path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : testgen::cli::kExitConfig;
    }

    if (gen->parsed()) {
        try {
            if (!config_path.empty()) cfg = RunConfig::load_file(config_path);
        } catch (const testgen::Error& e) {
            std::cerr << "config error: " << e.what() << "\n";
            return testgen::cli::kExitConfig;
        }
        // Flags win over the config file.
        if (!project_root.empty()) cfg.project_root = project_root;
        if (!language.empty()) cfg.language = language;
        if (!targets.empty()) cfg.targets = targets;
        if (!gateway_mode.empty()) cfg.gateway_mode = gateway_mode;
        if (!session_dir.empty()) cfg.session_dir = session_dir;
        if (!output_dir.empty()) cfg.output_dir = output_dir;
        if (!run_id.empty()) cfg.run_id = run_id;
        if (workers > 0) cfg.workers = workers;
        return testgen::cli::cmd_generate(cfg);
    }
    if (nat->parsed()) {
        return testgen::cli::cmd_naturalness(suite_dirs, nat_project, nat_out);
    }
    return testgen::cli::cmd_report(run_dir);
}
