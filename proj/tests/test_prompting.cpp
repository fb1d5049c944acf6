#include <gtest/gtest.h>

#include <filesystem>
#include <set>

#include "support/model_builder.hpp"
#include "testgen/analysis/python_analysis.hpp"
#include "testgen/error.hpp"
#include "testgen/prompt/prompt.hpp"

using namespace testgen;
using namespace testgen::prompt;
using namespace testgen::model;
using testgen::testsupport::build_model;

namespace {

struct JavaFixture {
    CodeModel model;
    FocalContext ctx;
};

// Focal class with constructors, accessors, a private chain, and mockable
// calls; flags select which features land in the context.
JavaFixture java_ctx(bool with_mocking, bool with_privates) {
    JavaFixture fx;
    std::string source = R"(package fx;
import lib.Conn;
public class Widget {
    private Conn conn;
    private String label;
    public Widget(Conn conn) { this.conn = conn; }
    public void setLabel(String label) { this.label = label; }
    public String getLabel() { return label; }
    public int act(Widget other) {
)";
    if (with_privates) source += "        prepare();\n";
    if (with_mocking) source += "        conn.query();\n";
    source += R"(        return 1;
    }
    private void prepare() {}
}
)";
    fx.model = build_model({{"fx/Widget.java", source}}, Language::java);

    analysis::AnalysisConfig cfg;
    if (with_mocking) cfg.mockable_apis = analysis::ApiAllowlist::from_lines({"lib.Conn"});
    const TypeDecl* widget = fx.model.find_type("fx.Widget");
    for (const auto& t : analysis::compute_testing_scope(*widget, fx.model)) {
        if (t.focal_method->name == "act") fx.ctx.focal = t;
    }
    fx.ctx.code_model = &fx.model;
    fx.ctx.constructors =
        analysis::collect_relevant_constructors(*fx.ctx.focal, fx.model, cfg);
    fx.ctx.accessors = analysis::collect_auxiliary_methods(*fx.ctx.focal, fx.model);
    if (with_privates) fx.ctx.call_chains = analysis::find_private_call_chains(*widget);
    if (with_mocking) {
        auto plan = analysis::build_mock_plan(*fx.ctx.focal, cfg, fx.model);
        if (!plan.empty()) {
            fx.ctx.skeleton = analysis::build_mock_skeleton(plan, *fx.ctx.focal);
            fx.ctx.mock_plan = std::move(plan);
        }
    }
    return fx;
}

struct PyFixture {
    CodeModel model;
    FocalContext ctx;
};

PyFixture python_ctx(bool with_fewshot) {
    PyFixture fx;
    fx.model = build_model({{"shapes.py", R"(class Circle:
    def __init__(self, r):
        self.r = r
)"},
                            {"timeutil.py", R"(import shapes

def to_minutes(h):
    return h * 60
)"}},
                           Language::python);
    fx.ctx.module = analysis::compute_module_scope(*fx.model.find_module("timeutil"));
    fx.ctx.code_model = &fx.model;
    fx.ctx.imported_constructors =
        analysis::collect_imported_constructors(*fx.model.find_module("timeutil"), fx.model);
    if (with_fewshot) fx.ctx.fewshot = analysis::bundled_fewshot_examples();
    return fx;
}

std::set<std::string> slot_set(const PromptBundle& b) {
    std::set<std::string> out;
    for (const auto& [slot, text] : b.sections) out.insert(slot_name(slot));
    return out;
}

}  // namespace

TEST(GenerationPrompt, JavaWithoutMockingHasNoMockSlots) {
    auto fx = java_ctx(false, true);
    PromptBundle b = build_generation_prompt(fx.ctx);
    EXPECT_EQ(slot_set(b), (std::set<std::string>{"a", "b", "c", "d", "e"}));
    EXPECT_EQ(b.kind, PromptKind::generation);
}

TEST(GenerationPrompt, PythonSlotsNeverIncludeAccessorsOrChains) {
    auto fx = python_ctx(true);
    PromptBundle b = build_generation_prompt(fx.ctx);
    EXPECT_EQ(slot_set(b), (std::set<std::string>{"a", "c", "d", "fewshot"}));
    EXPECT_FALSE(b.has(Slot::auxiliary_b));
    EXPECT_FALSE(b.has(Slot::call_chains_e));
    std::string text = render(b);
    EXPECT_NE(text.find("def to_minutes"), std::string::npos);
    EXPECT_NE(text.find("Circle(r)"), std::string::npos);
}

TEST(GenerationPrompt, JavaWithMockingIncludesSkeleton) {
    auto fx = java_ctx(true, false);
    PromptBundle b = build_generation_prompt(fx.ctx);
    EXPECT_TRUE(b.has(Slot::mock_decls_f));
    EXPECT_TRUE(b.has(Slot::mock_api_h));
    const std::string* f = b.get(Slot::mock_decls_f);
    EXPECT_NE(f->find("@Mock"), std::string::npos);
    EXPECT_NE(f->find("Test skeleton"), std::string::npos);
}

TEST(GenerationPrompt, FocalSlotAlwaysPresent) {
    for (bool mocking : {false, true}) {
        for (bool privates : {false, true}) {
            auto fx = java_ctx(mocking, privates);
            PromptBundle b = build_generation_prompt(fx.ctx);
            ASSERT_TRUE(b.has(Slot::focal_d));
            EXPECT_NE(b.get(Slot::focal_d)->find("act"), std::string::npos);
        }
    }
}

TEST(RepairPrompt, QuotesErroneousLineAndMessage) {
    auto fx = java_ctx(false, false);
    PromptBundle prior = build_generation_prompt(fx.ctx);
    std::string failing;
    for (int i = 1; i <= 20; ++i) failing += "line" + std::to_string(i) + "();\n";
    pipeline::Diagnostic diag;
    diag.phase = pipeline::Phase::compile;
    diag.message = "';' expected";
    diag.line = 12;
    PromptBundle b = build_repair_prompt(prior, failing, diag);
    EXPECT_EQ(b.kind, PromptKind::repair);
    ASSERT_TRUE(b.has(Slot::feedback));
    const std::string& fb = *b.get(Slot::feedback);
    EXPECT_NE(fb.find("';' expected"), std::string::npos);
    EXPECT_NE(fb.find("Erroneous line 12: line12();"), std::string::npos);
    EXPECT_TRUE(b.has(Slot::focal_d));
}

TEST(RepairPrompt, RuntimeFailureCarriesTraceAndFocalContext) {
    auto fx = java_ctx(false, false);
    PromptBundle prior = build_generation_prompt(fx.ctx);
    pipeline::Diagnostic diag;
    diag.phase = pipeline::Phase::assertion;
    diag.message = "expected 2 but was 3";
    diag.line = 4;
    PromptBundle b = build_repair_prompt(prior, "a();\nb();\nc();\nassertEquals(2, r);\n", diag);
    const std::string& fb = *b.get(Slot::feedback);
    EXPECT_NE(fb.find("assertion diagnostic"), std::string::npos);
    EXPECT_NE(fb.find("expected 2 but was 3"), std::string::npos);
    EXPECT_TRUE(b.has(Slot::focal_d));
}

TEST(RepairPrompt, MissingLineNumberAppendsWholeTest) {
    auto fx = java_ctx(false, false);
    PromptBundle prior = build_generation_prompt(fx.ctx);
    pipeline::Diagnostic diag;
    diag.phase = pipeline::Phase::compile;
    diag.message = "cannot resolve symbol";
    PromptBundle b = build_repair_prompt(prior, "whole test body", diag);
    const std::string& fb = *b.get(Slot::feedback);
    EXPECT_EQ(fb.find("Erroneous line"), std::string::npos);
    EXPECT_NE(fb.find("whole test body"), std::string::npos);
}

TEST(CoveragePrompt, ListsUncoveredLinesVerbatim) {
    auto fx = java_ctx(false, false);
    PromptBundle b = build_coverage_prompt(fx.ctx, {{14, "return -x;"}});
    EXPECT_EQ(b.kind, PromptKind::coverage);
    const std::string& fb = *b.get(Slot::feedback);
    EXPECT_NE(fb.find("14: return -x;"), std::string::npos);
}

TEST(CoveragePrompt, EmptyUncoveredThrows) {
    auto fx = java_ctx(false, false);
    EXPECT_THROW(build_coverage_prompt(fx.ctx, {}), EmptyUncoveredError);
}

TEST(CoveragePrompt, BudgetTruncatesPrefixWithNote) {
    auto fx = java_ctx(false, false);
    std::vector<std::pair<int, std::string>> uncovered;
    for (int i = 1; i <= 50; ++i)
        uncovered.emplace_back(i, "statement_number_" + std::to_string(i) + "();");
    PromptConfig cfg;
    cfg.token_budget = 400;
    PromptBundle b = build_coverage_prompt(fx.ctx, uncovered, cfg);
    const std::string& fb = *b.get(Slot::feedback);
    EXPECT_NE(fb.find("(showing first "), std::string::npos);
    EXPECT_NE(fb.find(" of 50 uncovered lines)"), std::string::npos);
    EXPECT_NE(fb.find("1: statement_number_1();"), std::string::npos);
}

TEST(Render, EqualBundlesRenderIdentically) {
    auto fx = java_ctx(true, true);
    PromptBundle a = build_generation_prompt(fx.ctx);
    PromptBundle b = build_generation_prompt(fx.ctx);
    EXPECT_EQ(render(a), render(b));
}

TEST(Render, NoEmptyHeadings) {
    auto fx = java_ctx(false, false);
    fx.ctx.call_chains.clear();
    PromptBundle b = build_generation_prompt(fx.ctx);
    std::string text = render(b);
    EXPECT_EQ(text.find("Call chains"), std::string::npos);
}

TEST(Render, FixedSectionOrder) {
    auto fx = java_ctx(true, true);
    PromptBundle b = build_generation_prompt(fx.ctx);
    std::string text = render(b);
    std::vector<std::string> headings = {
        "### Relevant constructors", "### Accessor methods", "### Testing guidance",
        "### Focal code under test", "### Call chains reaching private methods",
        "### Mocked fields and types"};
    size_t last = 0;
    for (const auto& h : headings) {
        size_t pos = text.find(h);
        ASSERT_NE(pos, std::string::npos) << h;
        EXPECT_GT(pos, last);
        last = pos;
    }
}

TEST(Render, DistinctSlotContentsYieldDistinctText) {
    auto fx = java_ctx(false, false);
    PromptBundle a = build_generation_prompt(fx.ctx);
    PromptBundle b = a;
    b.set(Slot::guidance_c, *a.get(Slot::guidance_c) + " extra");
    EXPECT_NE(render(a), render(b));
}

TEST(Budget, DropsChainsThenAccessorsThenConstructorsNeverFocal) {
    auto fx = java_ctx(false, true);
    PromptConfig no_budget;
    PromptBundle full = build_generation_prompt(fx.ctx, no_budget);
    ASSERT_TRUE(full.has(Slot::call_chains_e));
    int full_tokens = estimate_tokens(render(full));

    PromptConfig tight;
    tight.token_budget = full_tokens - 1;
    PromptBundle b1 = build_generation_prompt(fx.ctx, tight);
    EXPECT_FALSE(b1.has(Slot::call_chains_e));
    EXPECT_TRUE(b1.has(Slot::focal_d));

    tight.token_budget = estimate_tokens(render(b1)) - 1;
    PromptBundle b2 = build_generation_prompt(fx.ctx, tight);
    EXPECT_FALSE(b2.has(Slot::auxiliary_b));
    EXPECT_TRUE(b2.has(Slot::focal_d));

    tight.token_budget = estimate_tokens(render(b2)) - 1;
    PromptBundle b3 = build_generation_prompt(fx.ctx, tight);
    EXPECT_FALSE(b3.has(Slot::constructors_a));
    EXPECT_TRUE(b3.has(Slot::focal_d));
}

TEST(Budget, ThrowsOnlyWhenFocalAloneExceeds) {
    auto fx = java_ctx(false, false);
    PromptConfig cfg;
    cfg.token_budget = 1;  // the focal slot alone cannot fit
    EXPECT_THROW(build_generation_prompt(fx.ctx, cfg), BudgetExceededError);
}

TEST(Templates, DirectoryRoundTripRendersIdentically) {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "testgen_templates";
    fs::remove_all(dir);
    TemplateSet::builtin().write_dir(dir.string());
    TemplateSet loaded = TemplateSet::load_dir(dir.string());
    EXPECT_EQ(loaded.version(), TemplateSet::builtin().version());

    auto fx = java_ctx(true, true);
    PromptConfig with_loaded;
    with_loaded.templates = &loaded;
    PromptBundle a = build_generation_prompt(fx.ctx);
    PromptBundle b = build_generation_prompt(fx.ctx, with_loaded);
    EXPECT_EQ(render(a), render(b, with_loaded));
    fs::remove_all(dir);
}
