#include <gtest/gtest.h>

#include <filesystem>
#include <random>

#include "support/model_builder.hpp"
#include "testgen/analysis/python_analysis.hpp"
#include "testgen/error.hpp"
#include "testgen/llm/gateway.hpp"
#include "testgen/pipeline/fake_adapter.hpp"
#include "testgen/pipeline/pipeline.hpp"
#include "testgen/pipeline/run_report.hpp"
#include "testgen/pipeline/sanitize.hpp"
#include "testgen/pipeline/subprocess_adapter.hpp"
#include "testgen/util/text.hpp"

using namespace testgen;
using namespace testgen::pipeline;
using namespace testgen::model;
using testgen::testsupport::build_model;

namespace {

const char* kCalcSource = R"(class Calc {
    public String classify(int v) {
        if (v < 0) {
            return "negative";
        }
        if (v == 0) {
            return "zero";
        }
        return "positive";
    }
}
)";
// executable lines of Calc.java: 3, 4, 6, 7, 9

struct JavaFx {
    CodeModel model;
    prompt::FocalContext ctx;
    FakeToolchainAdapter adapter{Language::java};
    llm::SamplingConfig sampling;
    prompt::PromptConfig pcfg;

    JavaFx() {
        model = build_model({{"Calc.java", kCalcSource}}, Language::java);
        const TypeDecl* calc = model.find_type("Calc");
        auto targets = analysis::compute_testing_scope(*calc, model);
        ctx.focal = targets.front();
        ctx.code_model = &model;
        adapter.register_project(model);
    }
};

std::string clean_test(const std::string& covers) {
    return "class CalcTest {\n    // COVERS: Calc.java:" + covers +
           "\n    void testClassify() { probe(); }\n}\n";
}

std::string broken_test() {
    return "class CalcTest {\n    // COMPILE-ERROR: boom\n    void testClassify() { probe(); }\n}\n";
}

std::string failing_test(const std::string& covers) {
    return "class CalcTest {\n    // RUNTIME-FAIL: expected 2 but was 3\n    // COVERS: Calc.java:" +
           covers + "\n    void testClassify() { probe(); }\n}\n";
}

TestArtifact sanitized_artifact(const std::string& id, const std::string& text) {
    TestArtifact a(id, "Calc.classify(int)", text);
    a.set_text(sanitize(text, Language::java));
    a.advance(ArtifactStatus::sanitized);
    return a;
}

}  // namespace

TEST(ArtifactStatus, ForwardOnlyTransitions) {
    TestArtifact a("t1", "target", "raw text");
    EXPECT_EQ(a.status(), ArtifactStatus::raw);
    a.advance(ArtifactStatus::sanitized);
    a.advance(ArtifactStatus::compiling);
    a.advance(ArtifactStatus::passing);
    EXPECT_THROW(a.advance(ArtifactStatus::sanitized), std::logic_error);
    EXPECT_THROW(a.advance(ArtifactStatus::compiling), std::logic_error);
    // forward-only over the recorded log
    const auto& log = a.status_log();
    for (size_t i = 1; i < log.size(); ++i)
        EXPECT_LT(static_cast<int>(log[i - 1]), static_cast<int>(log[i]));
}

TEST(ArtifactStatus, DiscardedReachableFromAnywhere) {
    TestArtifact a("t1", "target", "text");
    a.advance(ArtifactStatus::sanitized);
    a.discard(Phase::compile, "gave up");
    EXPECT_EQ(a.status(), ArtifactStatus::discarded);
    EXPECT_THROW(a.advance(ArtifactStatus::discarded), std::logic_error);
}

TEST(RepairLoop, CompileErrorFixedOnSecondAttempt) {
    JavaFx fx;
    prompt::PromptBundle prior = prompt::build_generation_prompt(fx.ctx);
    llm::ScriptedGateway gateway;
    gateway.add_rule("compile diagnostic: boom", clean_test("3,4,6,7,9"));

    TestArtifact a = sanitized_artifact("calc_t1", broken_test());
    BudgetConfig budget;
    repair_loop(a, fx.ctx, prior, gateway, fx.adapter, budget, fx.sampling, fx.pcfg, nullptr);
    EXPECT_EQ(a.status(), ArtifactStatus::passing);
    EXPECT_EQ(a.attempts(Phase::compile), 1);
    ASSERT_FALSE(a.history().empty());
    EXPECT_FALSE(a.history()[0].prompt_hash.empty());
}

TEST(RepairLoop, ZeroBudgetDiscardsImmediately) {
    JavaFx fx;
    prompt::PromptBundle prior = prompt::build_generation_prompt(fx.ctx);
    llm::ScriptedGateway gateway;  // never consulted
    TestArtifact a = sanitized_artifact("calc_t1", broken_test());
    BudgetConfig budget;
    budget.max_iters = 0;
    repair_loop(a, fx.ctx, prior, gateway, fx.adapter, budget, fx.sampling, fx.pcfg, nullptr);
    EXPECT_EQ(a.status(), ArtifactStatus::discarded);
    EXPECT_EQ(a.attempts(Phase::compile), 0);
    EXPECT_EQ(gateway.call_count(), 0);
}

TEST(RepairLoop, RuntimeAssertionRepaired) {
    JavaFx fx;
    prompt::PromptBundle prior = prompt::build_generation_prompt(fx.ctx);
    llm::ScriptedGateway gateway;
    gateway.add_rule("expected 2 but was 3", clean_test("3,4,6,7,9"));

    TestArtifact a = sanitized_artifact("calc_t1", failing_test("3,4"));
    BudgetConfig budget;
    repair_loop(a, fx.ctx, prior, gateway, fx.adapter, budget, fx.sampling, fx.pcfg, nullptr);
    EXPECT_EQ(a.status(), ArtifactStatus::passing);
    EXPECT_EQ(a.attempts(Phase::assertion), 1);
    bool saw_runtime_phase = false;
    for (const auto& h : a.history())
        if (h.phase == Phase::assertion) saw_runtime_phase = true;
    EXPECT_TRUE(saw_runtime_phase);
}

TEST(RepairLoop, PersistentRuntimeFailureKeptAsFailing) {
    JavaFx fx;
    prompt::PromptBundle prior = prompt::build_generation_prompt(fx.ctx);
    llm::ScriptedGateway gateway;
    gateway.set_fallback(failing_test("3,4"));  // repairs never help
    TestArtifact a = sanitized_artifact("calc_t1", failing_test("3,4"));
    BudgetConfig budget;
    budget.max_iters = 2;
    repair_loop(a, fx.ctx, prior, gateway, fx.adapter, budget, fx.sampling, fx.pcfg, nullptr);
    EXPECT_EQ(a.status(), ArtifactStatus::failing);
    EXPECT_EQ(a.attempts(Phase::assertion), 2);
}

TEST(RepairLoop, PythonWarningCategoryNeverTriggersRepair) {
    auto model = build_model({{"timeutil.py", "def to_minutes(h):\n    return h * 60\n"}},
                             Language::python);
    prompt::FocalContext ctx;
    ctx.module = analysis::compute_module_scope(*model.find_module("timeutil"));
    ctx.code_model = &model;
    FakeToolchainAdapter adapter(Language::python);
    adapter.register_project(model);

    prompt::PromptBundle prior = prompt::build_generation_prompt(ctx);
    llm::ScriptedGateway gateway;  // any consultation would throw

    std::string text = "# LINT-WARNING: missing docstring\n# COVERS: timeutil.py:2\n"
                       "def test_to_minutes():\n    assert to_minutes(1) == 60\n";
    TestArtifact a("timeutil_t1", "timeutil", text);
    a.set_text(sanitize(text, Language::python));
    a.advance(ArtifactStatus::sanitized);
    BudgetConfig budget;
    llm::SamplingConfig sampling;
    prompt::PromptConfig pcfg;
    repair_loop(a, ctx, prior, gateway, adapter, budget, sampling, pcfg, nullptr);
    EXPECT_EQ(a.status(), ArtifactStatus::passing);
    EXPECT_EQ(gateway.call_count(), 0);
}

TEST(RepairLoop, PythonErrorCategoryDoesTriggerRepair) {
    auto model = build_model({{"timeutil.py", "def to_minutes(h):\n    return h * 60\n"}},
                             Language::python);
    prompt::FocalContext ctx;
    ctx.module = analysis::compute_module_scope(*model.find_module("timeutil"));
    ctx.code_model = &model;
    FakeToolchainAdapter adapter(Language::python);
    adapter.register_project(model);
    prompt::PromptBundle prior = prompt::build_generation_prompt(ctx);

    llm::ScriptedGateway gateway;
    gateway.add_rule("undefined name", "# COVERS: timeutil.py:2\n"
                                       "def test_to_minutes():\n    assert to_minutes(1) == 60\n");
    std::string text = "# LINT-ERROR: undefined name 'minutes'\n"
                       "def test_to_minutes():\n    assert minutes(1) == 60\n";
    TestArtifact a("timeutil_t1", "timeutil", text);
    a.set_text(sanitize(text, Language::python));
    a.advance(ArtifactStatus::sanitized);
    BudgetConfig budget;
    llm::SamplingConfig sampling;
    prompt::PromptConfig pcfg;
    repair_loop(a, ctx, prior, gateway, adapter, budget, sampling, pcfg, nullptr);
    EXPECT_EQ(a.status(), ArtifactStatus::passing);
    EXPECT_EQ(a.attempts(Phase::lint), 1);
}

TEST(SplitOutcomes, PartitionExcludesDiscarded) {
    std::vector<TestArtifact> suite;
    suite.emplace_back("p", "t", "x");
    suite.back().advance(ArtifactStatus::sanitized);
    suite.back().advance(ArtifactStatus::compiling);
    suite.back().advance(ArtifactStatus::passing);
    suite.emplace_back("f", "t", "x");
    suite.back().advance(ArtifactStatus::sanitized);
    suite.back().advance(ArtifactStatus::compiling);
    suite.back().advance(ArtifactStatus::failing);
    suite.emplace_back("d", "t", "x");
    suite.back().discard(Phase::parse, "prose");

    auto [passing, failing] = split_outcomes(suite);
    ASSERT_EQ(passing.size(), 1u);
    EXPECT_EQ(passing[0]->id(), "p");
    ASSERT_EQ(failing.size(), 1u);
    EXPECT_EQ(failing[0]->id(), "f");
}

TEST(SplitOutcomes, EmptySuite) {
    std::vector<TestArtifact> suite;
    auto [passing, failing] = split_outcomes(suite);
    EXPECT_TRUE(passing.empty());
    EXPECT_TRUE(failing.empty());
}

TEST(AugmentCoverage, FullCoverageMeansZeroRounds) {
    JavaFx fx;
    llm::ScriptedGateway gateway;  // never consulted
    std::vector<TestArtifact> suite;
    suite.push_back(sanitized_artifact("calc_t1", clean_test("3,4,6,7,9")));
    suite.back().advance(ArtifactStatus::compiling);
    suite.back().advance(ArtifactStatus::passing);
    BudgetConfig budget;
    int admitted = augment_coverage(fx.ctx, suite, gateway, fx.adapter, budget, fx.sampling,
                                    fx.pcfg, nullptr);
    EXPECT_EQ(admitted, 0);
    EXPECT_EQ(gateway.call_count(), 0);
    EXPECT_EQ(suite.size(), 1u);
}

TEST(AugmentCoverage, AdmitsTestThatIncreasesCoverage) {
    JavaFx fx;
    llm::ScriptedGateway gateway;
    gateway.add_rule("Uncovered lines", clean_test("6,7,9"));
    std::vector<TestArtifact> suite;
    suite.push_back(sanitized_artifact("calc_t1", clean_test("3,4")));
    suite.back().advance(ArtifactStatus::compiling);
    suite.back().advance(ArtifactStatus::passing);
    BudgetConfig budget;
    int admitted = augment_coverage(fx.ctx, suite, gateway, fx.adapter, budget, fx.sampling,
                                    fx.pcfg, nullptr);
    EXPECT_EQ(admitted, 1);
    ASSERT_EQ(suite.size(), 2u);
    EXPECT_EQ(suite[1].status(), ArtifactStatus::passing);
    // the prompt listed the real uncovered source lines
}

TEST(AugmentCoverage, DuplicateTestStopsWithoutAdmission) {
    JavaFx fx;
    llm::ScriptedGateway gateway;
    gateway.set_fallback(clean_test("3,4"));  // same lines again
    std::vector<TestArtifact> suite;
    suite.push_back(sanitized_artifact("calc_t1", clean_test("3,4")));
    suite.back().advance(ArtifactStatus::compiling);
    suite.back().advance(ArtifactStatus::passing);
    BudgetConfig budget;
    int admitted = augment_coverage(fx.ctx, suite, gateway, fx.adapter, budget, fx.sampling,
                                    fx.pcfg, nullptr);
    EXPECT_EQ(admitted, 0);
    EXPECT_EQ(gateway.call_count(), 1);  // one round, then zero-progress stop
    ASSERT_EQ(suite.size(), 2u);
    EXPECT_EQ(suite[0].status(), ArtifactStatus::passing);  // original untouched
    EXPECT_EQ(suite[1].status(), ArtifactStatus::discarded);
}

TEST(RunTarget, BudgetAndMonotonicityOnRandomizedRuns) {
    std::mt19937 rng(777);
    for (int i = 0; i < 20; ++i) {
        JavaFx fx;
        BudgetConfig budget;
        budget.max_iters = std::uniform_int_distribution<int>(0, 3)(rng);
        int broken = std::uniform_int_distribution<int>(0, 5)(rng);

        llm::ScriptedGateway gateway;
        gateway.add_rule("Focal method: classify",
                         broken > 0 ? broken_test() : clean_test("3,4,6,7,9"));
        for (int k = 1; k < broken; ++k) gateway.add_rule("compile diagnostic: boom", broken_test());
        if (broken > 0) gateway.add_rule("compile diagnostic: boom", clean_test("3,4,6,7,9"));
        gateway.set_fallback(clean_test("3,4,6,7,9"));

        TargetRun run =
            run_target(fx.ctx, gateway, fx.adapter, budget, fx.sampling, fx.pcfg);
        ASSERT_FALSE(run.artifacts.empty());
        const TestArtifact& t1 = run.artifacts.front();
        for (const auto& [phase, count] : t1.attempt_counts())
            EXPECT_LE(count, budget.max_iters);
        if (broken <= budget.max_iters) {
            EXPECT_EQ(t1.status(), ArtifactStatus::passing) << "broken=" << broken;
            EXPECT_EQ(t1.attempts(Phase::compile), broken);
        } else {
            EXPECT_EQ(t1.status(), ArtifactStatus::discarded);
            EXPECT_EQ(t1.attempts(Phase::compile), budget.max_iters);
        }
    }
}

TEST(PersistRun, IdempotentPerRunId) {
    JavaFx fx;
    llm::ScriptedGateway gateway;
    gateway.add_rule("Focal method: classify", clean_test("3,4,6,7,9"));
    BudgetConfig budget;
    TargetRun run = run_target(fx.ctx, gateway, fx.adapter, budget, fx.sampling, fx.pcfg);

    RunOutput out;
    out.language = Language::java;
    out.target_runs = {run};
    std::vector<TargetRun> for_report = {run};
    out.report = assemble_report("fixed", Language::java, "stub-model", for_report);

    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "testgen_persist";
    fs::remove_all(dir);
    std::string path1 = persist_run(out, dir.string());
    std::string first = util::read_file(path1);
    std::string path2 = persist_run(out, dir.string());
    EXPECT_EQ(path1, path2);
    EXPECT_EQ(util::read_file(path2), first);
    EXPECT_NE(first.find("\"run_id\": \"fixed\""), std::string::npos);

    RunReport loaded = RunReport::from_json_text(first);
    ASSERT_EQ(loaded.targets.size(), 1u);
    EXPECT_EQ(loaded.targets[0].tests[0].status, "passing");
    fs::remove_all(dir);
}

TEST(PersistRun, UnwritableDirectoryRaisesIoError) {
    RunOutput out;
    out.report.run_id = "x";
    EXPECT_THROW(persist_run(out, "/proc/definitely/not/writable"), IoError);
}

TEST(SubprocessAdapter, JavacDiagnosticsParsing) {
    auto diags = parse_javac_diagnostics(
        "CalcTest.java:12: error: ';' expected\n        probe()\n               ^\n"
        "CalcTest.java:20: warning: [deprecation] old() in Calc\n1 error\n");
    ASSERT_EQ(diags.size(), 2u);
    EXPECT_EQ(diags[0].severity, Severity::error);
    EXPECT_EQ(*diags[0].line, 12);
    EXPECT_EQ(diags[0].message, "';' expected");
    EXPECT_EQ(diags[1].severity, Severity::warning);
}

TEST(SubprocessAdapter, PylintDiagnosticsParsing) {
    auto diags = parse_pylint_diagnostics(
        "test_mod.py:3:0: E0602: Undefined variable 'minutes' (undefined-variable)\n"
        "test_mod.py:1:0: C0114: Missing module docstring (missing-module-docstring)\n"
        "test_mod.py:7:0: W0611: Unused import os (unused-import)\n");
    ASSERT_EQ(diags.size(), 3u);
    EXPECT_EQ(diags[0].category, "error");
    EXPECT_EQ(diags[1].category, "convention");
    EXPECT_EQ(diags[2].category, "warning");
    EXPECT_EQ(*diags[0].line, 3);
}

TEST(SubprocessAdapter, CommandsRunInSandbox) {
    namespace fs = std::filesystem;
    fs::path sandbox = fs::temp_directory_path() / "testgen_sandbox";
    fs::remove_all(sandbox);

    SubprocessConfig cfg;
    cfg.sandbox_dir = sandbox.string();
    cfg.language = Language::java;
    cfg.compile_cmd = "ls {files} > /dev/null";
    cfg.run_cmd = "grep -q RUNTIME_BAD {file} && exit 1; exit 0";
    cfg.coverage_cmd = "printf '%s' '<report><package name=\"p\"><sourcefile name=\"F.java\">"
                       "<line nr=\"1\" ci=\"1\"/></sourcefile></package></report>' > cov.xml";
    cfg.coverage_file = "cov.xml";
    cfg.coverage_format = "xml";
    SubprocessToolchainAdapter adapter(cfg);

    std::vector<TestFile> tests = {{"t1", "T1.java", "class T1 {}"},
                                   {"t2", "T2.java", "class T2 { /* RUNTIME_BAD */ }"}};
    EXPECT_TRUE(adapter.compile(tests).empty());
    auto results = adapter.run(tests);
    ASSERT_EQ(results.size(), 2u);
    EXPECT_TRUE(results[0].passed);
    EXPECT_FALSE(results[1].passed);
    CoverageReport cov = adapter.coverage(tests);
    EXPECT_NEAR(cov.line_coverage("p/F.java"), 1.0, 1e-12);
    fs::remove_all(sandbox);
}
