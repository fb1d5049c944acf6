#include "testgen/cli/commands.hpp"

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <thread>

#include "testgen/analysis/python_analysis.hpp"
#include "testgen/error.hpp"
#include "testgen/llm/http_gateway.hpp"
#include "testgen/llm/record_replay.hpp"
#include "testgen/model/parser.hpp"
#include "testgen/naturalness/report.hpp"
#include "testgen/pipeline/fake_adapter.hpp"
#include "testgen/pipeline/pipeline.hpp"
#include "testgen/pipeline/subprocess_adapter.hpp"
#include "testgen/util/text.hpp"

namespace testgen::cli {

namespace fs = std::filesystem;
using model::CodeModel;
using model::Language;

namespace {

void load_units(CodeModel& model, const std::string& root, Language language) {
    std::string ext = language == Language::java ? ".java" : ".py";
    std::vector<std::string> paths;
    for (const auto& entry : fs::recursive_directory_iterator(root)) {
        if (entry.is_regular_file() && entry.path().extension() == ext)
            paths.push_back(entry.path().string());
    }
    std::sort(paths.begin(), paths.end());
    for (const auto& path : paths) {
        std::string rel = fs::relative(path, root).string();
        model.add_unit(model::parse_unit(util::read_file(path), language, rel));
    }
}

}  // namespace

CodeModel load_project(const std::string& root, Language language) {
    if (!fs::is_directory(root)) throw ConfigError("project root not found: " + root);
    CodeModel model;
    load_units(model, root, language);
    model.finalize();
    return model;
}

CodeModel load_project_mixed(const std::string& root) {
    if (!fs::is_directory(root)) throw ConfigError("project root not found: " + root);
    CodeModel model;
    load_units(model, root, Language::java);
    load_units(model, root, Language::python);
    model.finalize();
    return model;
}

namespace {

bool matches_filter(const std::vector<std::string>& globs, const std::string& qualified,
                    const std::string& simple) {
    if (globs.empty()) return true;
    for (const auto& g : globs) {
        if (glob_match(g, qualified) || glob_match(g, simple)) return true;
        // Allow "Class.method" style filters against the qualified id.
        if (qualified.find(g) != std::string::npos) return true;
    }
    return false;
}

}  // namespace

std::vector<prompt::FocalContext> build_contexts(const CodeModel& model, Language language,
                                                 const analysis::AnalysisConfig& analysis_cfg,
                                                 const std::vector<std::string>& target_globs,
                                                 const std::string& fewshot_dir) {
    std::vector<prompt::FocalContext> out;

    if (language == Language::python) {
        analysis::FewShotConfig fs_cfg;
        fs_cfg.corpus_dir = fewshot_dir;
        auto examples = analysis::select_fewshot_examples(fs_cfg);
        for (const auto& unit : model.units()) {
            if (unit->language != Language::python) continue;
            std::string simple = unit->package_name;
            auto dot = simple.rfind('.');
            if (dot != std::string::npos) simple = simple.substr(dot + 1);
            if (!matches_filter(target_globs, unit->package_name, simple)) continue;
            prompt::FocalContext ctx;
            ctx.module = analysis::compute_module_scope(*unit);
            ctx.code_model = &model;
            ctx.imported_constructors = analysis::collect_imported_constructors(*unit, model);
            ctx.fewshot = examples;
            out.push_back(std::move(ctx));
        }
        return out;
    }

    for (model::TypeDecl* type : model.all_types()) {
        for (const analysis::FocalTarget& target :
             analysis::compute_testing_scope(*type, model)) {
            std::string qualified = target.id();
            if (!matches_filter(target_globs, qualified, type->simple_name())) continue;
            prompt::FocalContext ctx;
            ctx.focal = target;
            ctx.code_model = &model;
            ctx.constructors = analysis::collect_relevant_constructors(target, model, analysis_cfg);
            ctx.accessors = analysis::collect_auxiliary_methods(target, model);
            ctx.call_chains = analysis::find_private_call_chains(*type);
            if (!analysis_cfg.mockable_apis.empty()) {
                analysis::MockPlan plan = analysis::build_mock_plan(target, analysis_cfg, model);
                if (!plan.empty()) {
                    ctx.skeleton = analysis::build_mock_skeleton(plan, target);
                    ctx.mock_plan = std::move(plan);
                }
            }
            out.push_back(std::move(ctx));
        }
    }
    return out;
}

namespace {

std::unique_ptr<llm::ChatGateway> make_gateway(const RunConfig& config) {
    if (config.gateway_mode == "replay")
        return std::make_unique<llm::ReplayGateway>(config.session_dir);
    auto live = std::make_unique<llm::HttpChatGateway>();
    if (config.gateway_mode == "live") return live;
    // record: wrap the live gateway; ownership of both must survive, so bundle
    // them in a small holder.
    struct RecordingHolder : llm::ChatGateway {
        std::unique_ptr<llm::ChatGateway> inner;
        std::unique_ptr<llm::RecordingGateway> recorder;
        llm::Completion complete(const std::string& p, const llm::SamplingConfig& c) override {
            return recorder->complete(p, c);
        }
    };
    auto holder = std::make_unique<RecordingHolder>();
    holder->inner = std::move(live);
    holder->recorder =
        std::make_unique<llm::RecordingGateway>(*holder->inner, config.session_dir);
    return holder;
}

std::unique_ptr<pipeline::ToolchainAdapter> make_adapter(const RunConfig& config,
                                                         const CodeModel& model,
                                                         const std::string& target_id) {
    Language lang = config.language == "java" ? Language::java : Language::python;
    if (config.adapter_kind == "fake") {
        auto fake = std::make_unique<pipeline::FakeToolchainAdapter>(lang);
        fake->register_project(model);
        return fake;
    }
    pipeline::SubprocessConfig sub;
    sub.language = lang;
    sub.compile_cmd = config.compile_cmd;
    sub.run_cmd = config.run_cmd;
    sub.coverage_cmd = config.coverage_cmd;
    sub.coverage_file = config.coverage_file;
    sub.coverage_format = config.coverage_format;
    sub.sandbox_dir = (fs::path(config.output_dir) / ("run-" + config.run_id) / "sandbox" /
                       pipeline::safe_id(target_id))
                          .string();
    fs::create_directories(sub.sandbox_dir);
    // Hermetic per-target copy of the project.
    std::error_code ec;
    fs::copy(config.project_root, sub.sandbox_dir,
             fs::copy_options::recursive | fs::copy_options::overwrite_existing, ec);
    return std::make_unique<pipeline::SubprocessToolchainAdapter>(std::move(sub));
}

}  // namespace

int cmd_generate(const RunConfig& config, pipeline::RunOutput* out) {
    try {
        config.validate();
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    }

    Language lang = config.language == "java" ? Language::java : Language::python;
    CodeModel model;
    std::vector<prompt::FocalContext> contexts;
    analysis::AnalysisConfig analysis_cfg;
    std::unique_ptr<llm::ChatGateway> gateway;
    try {
        model = load_project(config.project_root, lang);
        analysis_cfg.max_constructor_depth = config.max_constructor_depth;
        if (!config.mock_allowlist_path.empty())
            analysis_cfg.mockable_apis =
                analysis::ApiAllowlist::from_file(config.mock_allowlist_path);
        if (!config.service_entry_allowlist_path.empty())
            analysis_cfg.service_entry_types =
                analysis::ApiAllowlist::from_file(config.service_entry_allowlist_path);
        contexts = build_contexts(model, lang, analysis_cfg, config.targets, config.fewshot_dir);
        gateway = make_gateway(config);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitToolchain;
    }

    pipeline::BudgetConfig budget;
    budget.max_iters = config.max_iters;
    budget.max_rounds = config.max_rounds;
    budget.target_coverage = config.target_coverage;

    prompt::PromptConfig pcfg;
    pcfg.token_budget = config.token_budget;
    prompt::TemplateSet templates;
    if (!config.templates_dir.empty()) {
        templates = prompt::TemplateSet::load_dir(config.templates_dir);
        pcfg.templates = &templates;
    }

    // Bounded worker pool; each worker owns a private adapter per target and
    // the collector assembles results single-threaded afterwards.
    std::vector<pipeline::TargetRun> runs(contexts.size());
    std::vector<std::string> failures(contexts.size());
    std::atomic<size_t> next{0};
    auto worker = [&]() {
        while (true) {
            size_t i = next.fetch_add(1);
            if (i >= contexts.size()) break;
            try {
                auto adapter = make_adapter(config, model, contexts[i].target_id());
                runs[i] = pipeline::run_target(contexts[i], *gateway, *adapter, budget,
                                               config.sampling, pcfg);
            } catch (const std::exception& e) {
                failures[i] = e.what();
            }
        }
    };
    size_t thread_count = std::min<size_t>(config.workers, std::max<size_t>(contexts.size(), 1));
    std::vector<std::thread> pool;
    for (size_t i = 0; i < thread_count; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    for (size_t i = 0; i < failures.size(); ++i) {
        if (!failures[i].empty()) {
            std::cerr << "target " << contexts[i].target_id() << " failed: " << failures[i]
                      << "\n";
            return kExitToolchain;
        }
    }

    pipeline::RunOutput output;
    output.language = lang;
    output.target_runs = std::move(runs);
    output.report = pipeline::assemble_report(config.run_id, lang, config.sampling.model_id,
                                              output.target_runs);
    try {
        std::string report_path = pipeline::persist_run(output, config.output_dir);
        std::cout << "run report: " << report_path << "\n";
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitToolchain;
    }

    bool any_passing = false;
    for (const auto& t : output.report.targets)
        for (const auto& test : t.tests)
            if (test.status == "passing") any_passing = true;
    if (out) *out = std::move(output);
    if (contexts.empty()) return kExitOk;
    return any_passing ? kExitOk : kExitToolchain;
}

int cmd_naturalness(const std::vector<std::string>& suite_dirs, const std::string& project_root,
                    const std::string& out_path) {
    try {
        CodeModel model;
        if (!project_root.empty()) model = load_project_mixed(project_root);
        std::vector<std::pair<std::string, std::string>> suites;
        for (const auto& dir : suite_dirs) {
            suites.emplace_back(fs::path(dir).filename().string(), dir);
        }
        auto report = naturalness::naturalness_report(suites, model);
        std::string text = report.to_json_text();
        if (out_path.empty() || out_path == "-") {
            std::cout << text;
        } else {
            util::write_file(out_path, text);
            std::cout << "naturalness report: " << out_path << "\n";
        }
        return kExitOk;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
}

int cmd_report(const std::string& run_dir) {
    try {
        fs::path report_path = fs::path(run_dir) / "report.json";
        if (!fs::exists(report_path)) report_path = run_dir;  // direct file path
        if (!fs::exists(report_path)) throw IoError("run report not found under " + run_dir);
        auto report = pipeline::RunReport::from_json_text(util::read_file(report_path.string()));

        std::printf("run %s  language=%s  model=%s\n", report.run_id.c_str(),
                    report.language.c_str(), report.model_id.c_str());
        std::printf("%-50s %6s %8s %8s %7s %7s %7s\n", "target", "tests", "passing", "failing",
                    "line", "branch", "method");
        for (const auto& t : report.targets) {
            int passing = 0, failing = 0;
            for (const auto& e : t.tests) {
                if (e.status == "passing") ++passing;
                if (e.status == "failing") ++failing;
            }
            std::printf("%-50s %6zu %8d %8d %6.1f%% %6.1f%% %6.1f%%\n", t.target_id.c_str(),
                        t.tests.size(), passing, failing, 100.0 * t.line_cov,
                        100.0 * t.branch_cov, 100.0 * t.method_cov);
        }
        return kExitOk;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
}

}  // namespace testgen::cli
