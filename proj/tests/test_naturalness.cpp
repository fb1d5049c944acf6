#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <random>

#include "support/model_builder.hpp"
#include "support/oracles.hpp"
#include "testgen/error.hpp"
#include "testgen/naturalness/levenshtein.hpp"
#include "testgen/naturalness/metrics.hpp"
#include "testgen/naturalness/report.hpp"
#include "testgen/util/text.hpp"

using namespace testgen;
using namespace testgen::naturalness;
using namespace testgen::model;
using testgen::testsupport::build_model;

namespace {

// Apache-CLI-flavored focal class for the flatten() example.
const char* kParserSource = R"(package cli;
public class BasicParser {
    public BasicParser() {}
    public String[] flatten(Options options, String[] arguments, boolean stopAtNonOption) {
        return arguments;
    }
}
)";

const char* kOptionsSource = R"(package cli;
public class Options {
    private String name;
    public Options() {}
    public void addOption(String opt) { this.name = opt; }
    public String getName() { return name; }
}
)";

CodeModel cli_model() {
    return build_model({{"cli/BasicParser.java", kParserSource},
                        {"cli/Options.java", kOptionsSource}},
                       Language::java);
}

std::unique_ptr<CodeUnit> parse_test_file(const std::string& source, const std::string& path) {
    Language lang = util::ends_with(path, ".py") ? Language::python : Language::java;
    return parse_unit(source, lang, path);
}

}  // namespace

TEST(Levenshtein, MatchesRecursiveOracle) {
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> len(0, 10);
    std::uniform_int_distribution<int> ch(0, 3);
    for (int i = 0; i < 200; ++i) {
        std::string a, b;
        for (int k = len(rng); k > 0; --k) a += static_cast<char>('a' + ch(rng));
        for (int k = len(rng); k > 0; --k) b += static_cast<char>('a' + ch(rng));
        EXPECT_EQ(levenshtein_distance(a, b), testsupport::levenshtein_recursive(a, b))
            << a << " vs " << b;
        EXPECT_NEAR(normalized_similarity(a, b), testsupport::oracle_similarity(a, b), 1e-12);
    }
}

TEST(Levenshtein, AppendingNoiseNeverIncreasesSimilarity) {
    std::string token = "arguments";
    double base = normalized_similarity(token, token);
    EXPECT_DOUBLE_EQ(base, 1.0);
    std::string noisy = token;
    double prev = base;
    for (char c : std::string("xqzk")) {
        noisy += c;
        double s = normalized_similarity(noisy, token);
        EXPECT_LE(s, prev + 1e-12);
        prev = s;
    }
}

TEST(AssertionMetrics, RatioArithmetic) {
    auto unit = parse_test_file(R"(class T {
    void testFive() {
        int a = 1;
        int b = 2;
        int c = a + b;
        assertEquals(3, c);
        assertTrue(c > 0);
    }
})",
                                "TTest.java");
    AssertionMetrics m = assertion_metrics(*unit);
    EXPECT_EQ(m.test_count, 1);
    EXPECT_NEAR(m.assertion_ratio, 0.4, 1e-12);
}

TEST(AssertionMetrics, DenominatorExcludesAssertionFreeTests) {
    auto unit = parse_test_file(R"(class T {
    void testNoAssert() {
        run();
    }
    void testOneAssert() {
        assertEquals(1, one());
    }
})",
                                "TTest.java");
    AssertionMetrics m = assertion_metrics(*unit);
    EXPECT_EQ(m.test_count, 2);
    EXPECT_NEAR(m.pct_no_assertions, 50.0, 1e-12);
    EXPECT_EQ(m.tests_with_assertions, 1);
    EXPECT_NEAR(m.pct_duplicate_assertions, 0.0, 1e-12);
}

TEST(AssertionMetrics, DuplicateAssertionsDetected) {
    auto unit = parse_test_file(R"(class T {
    void testDup() {
        assertEquals(a, b);
        assertEquals(a,  b);
    }
})",
                                "TTest.java");
    AssertionMetrics m = assertion_metrics(*unit);
    EXPECT_NEAR(m.pct_duplicate_assertions, 100.0, 1e-12);
}

TEST(AssertionMetrics, NotATestFile) {
    auto unit = parse_test_file("class Plain { void helper() {} }", "Plain.java");
    EXPECT_THROW(assertion_metrics(*unit), NotATestFileError);
}

TEST(AssertionMetrics, PythonForms) {
    auto unit = parse_test_file(R"(import pytest

def test_values():
    result = compute(2)
    assert result == 4

def test_raises():
    with pytest.raises(ValueError):
        compute(-1)

def test_none():
    assert compute(0) is None
)",
                                "test_mod.py");
    AssertionMetrics m = assertion_metrics(*unit);
    EXPECT_EQ(m.test_count, 3);
    EXPECT_NEAR(m.pct_no_assertions, 0.0, 1e-12);
    EXPECT_NEAR(m.pct_exception_assertions, 100.0 / 3.0, 1e-9);
    EXPECT_NEAR(m.pct_null_assertions, 100.0 / 3.0, 1e-9);
}

TEST(FocalInference, TestFileNameAffixHeuristic) {
    auto model = cli_model();
    auto unit = parse_test_file(R"(class OptionsTest {
    void testAddOption() {
        Options options = new Options();
        options.addOption("v");
        helperOnly();
    }
})",
                                "cli/OptionsTest.java");
    FocalCandidates c = infer_focal_methods(*unit, model);
    ASSERT_NE(c.focal_class, nullptr);
    EXPECT_EQ(c.focal_class->simple_name(), "Options");
    EXPECT_EQ(c.names, std::vector<std::string>{"addOption"});
}

TEST(FocalInference, PythonAnyCalledName) {
    CodeModel empty;
    auto unit = parse_test_file(R"(def test_to_minutes():
    assert to_minutes(2) == 120
)",
                                "test_timeutil.py");
    FocalCandidates c = infer_focal_methods(*unit, empty);
    EXPECT_TRUE(std::find(c.names.begin(), c.names.end(), "to_minutes") != c.names.end());
}

TEST(FocalInference, NoCallSitesMeansNoCandidates) {
    auto model = cli_model();
    auto unit = parse_test_file("class OptionsTest { void testNothing() { } }",
                                "OptionsTest.java");
    FocalCandidates c = infer_focal_methods(*unit, model);
    EXPECT_TRUE(c.names.empty());
}

TEST(NameScore, WorkedExampleTokenization) {
    NameScore s = test_name_score("test_addOption_longArgs_throwsException", {"addOption"},
                                  {"longArgs", "Options", "addOption"},
                                  {"IllegalArgumentException"});
    EXPECT_TRUE(s.focal_match);
    EXPECT_EQ(s.residual_tokens, (std::vector<std::string>{"long", "args", "longargs"}));
    // exception-flavored segment matched separately against thrown exceptions
    EXPECT_EQ(s.exception_tokens,
              (std::vector<std::string>{"throws", "exception", "throwsexception"}));
    EXPECT_GE(s.total, 0.5);  // the focal half contributes exactly 0.5
    NameScore without_focal = test_name_score("test_longArgs_throwsException", {},
                                              {"longArgs", "Options", "addOption"},
                                              {"IllegalArgumentException"});
    EXPECT_NEAR(s.total - without_focal.total, 0.5, 1e-9);
}

TEST(NameScore, NonDescriptiveNameScoresNearZero) {
    NameScore s = test_name_score("test01", {"flatten"},
                                  {"flatten", "options", "arguments", "stopAtNonOption"}, {});
    EXPECT_FALSE(s.focal_match);
    EXPECT_LT(s.total, 0.2);
}

TEST(NameScore, ExactFocalNameScoresFull) {
    NameScore s = test_name_score("testAddOption", {"addOption"}, {"addOption"}, {});
    EXPECT_TRUE(s.focal_match);
    EXPECT_TRUE(s.residual_tokens.empty());
    EXPECT_DOUBLE_EQ(s.token_closeness, 1.0);
    EXPECT_DOUBLE_EQ(s.total, 1.0);
}

TEST(NameScore, BoundedForArbitraryNames) {
    std::mt19937 rng(3);
    std::uniform_int_distribution<int> len(1, 24);
    std::uniform_int_distribution<int> ch(0, 27);
    for (int i = 0; i < 100; ++i) {
        std::string name = "test";
        for (int k = len(rng); k > 0; --k) {
            int c = ch(rng);
            name += c < 26 ? static_cast<char>('a' + c) : '_';
        }
        NameScore s = test_name_score(name, {"focal"}, {"alpha", "beta"}, {"Error"});
        EXPECT_GE(s.total, 0.0);
        EXPECT_LE(s.total, 1.0);
        EXPECT_GE(s.token_closeness, 0.0);
        EXPECT_LE(s.token_closeness, 1.0);
    }
}

TEST(VariableScore, FlattenedArgumentsBeatsStringArray) {
    auto model = cli_model();
    auto unit = parse_test_file(R"(class BasicParserTest {
    void testFlattenMeaningful() {
        BasicParser parser = new BasicParser();
        String[] flattenedArguments = parser.flatten(options, arguments, stop);
        assertNotNull(flattenedArguments);
    }
    void testFlattenGeneric() {
        BasicParser parser = new BasicParser();
        String[] stringArray1 = parser.flatten(options, arguments, stop);
        assertNotNull(stringArray1);
    }
})",
                                "cli/BasicParserTest.java");
    auto tests = find_test_methods(*unit);
    ASSERT_EQ(tests.size(), 2u);
    TestVariableScores meaningful = variable_name_score(*tests[0], model);
    TestVariableScores generic = variable_name_score(*tests[1], model);

    auto var_score = [](const TestVariableScores& vs, const std::string& name) {
        for (const auto& v : vs.variables)
            if (v.name == name) return v.score;
        return -1.0;
    };
    double flattened = var_score(meaningful, "flattenedArguments");
    double generic_arr = var_score(generic, "stringArray1");
    ASSERT_GE(flattened, 0.0);
    ASSERT_GE(generic_arr, 0.0);

    // Frozen expectation from the independent recursive-Levenshtein oracle:
    // best context match for both variables is the formal parameter
    // "arguments" of flatten(Options, String[], boolean).
    std::vector<std::string> pool = {"flatten", "options", "arguments", "stopatnonoption"};
    auto oracle_best = [&](const std::string& var) {
        double best = 0;
        for (const auto& p : pool) best = std::max(best, testsupport::oracle_similarity(var, p));
        return best;
    };
    EXPECT_NEAR(flattened, oracle_best("flattenedarguments"), 1e-9);
    EXPECT_NEAR(generic_arr, oracle_best("stringarray1"), 1e-9);
    EXPECT_GT(flattened, generic_arr);
}

TEST(VariableScore, TypeNameSuffixRuleForObjectGroup) {
    auto model = cli_model();
    auto unit = parse_test_file(R"(class BasicParserTest {
    void testParser() {
        BasicParser parser = new BasicParser();
        assertNotNull(parser);
    }
})",
                                "cli/BasicParserTest.java");
    auto tests = find_test_methods(*unit);
    TestVariableScores vs = variable_name_score(*tests[0], model);
    ASSERT_EQ(vs.variables.size(), 1u);
    EXPECT_FALSE(vs.variables[0].data_structure_group);
    EXPECT_DOUBLE_EQ(vs.variables[0].score, 1.0);  // "parser" is a camel suffix of BasicParser
}

TEST(VariableScore, ExactParameterNameScoresFull) {
    auto model = cli_model();
    auto unit = parse_test_file(R"(class BasicParserTest {
    void testArgs() {
        String[] arguments = parser.flatten(options, raw, stop);
        assertNotNull(arguments);
    }
})",
                                "cli/BasicParserTest.java");
    auto tests = find_test_methods(*unit);
    TestVariableScores vs = variable_name_score(*tests[0], model);
    ASSERT_EQ(vs.variables.size(), 1u);
    EXPECT_TRUE(vs.variables[0].data_structure_group);
    EXPECT_DOUBLE_EQ(vs.variables[0].score, 1.0);
}

TEST(ThrownExceptions, CollectedFromBodyForms) {
    auto unit = parse_test_file(R"(class T {
    void testBoom() {
        assertThrows(IllegalArgumentException.class, () -> run());
        try {
            other();
        } catch (java.io.IOException e) {
        }
        throw new IllegalStateException("x");
    }
})",
                                "TTest.java");
    auto tests = find_test_methods(*unit);
    auto names = thrown_exception_names(*tests[0]);
    EXPECT_TRUE(std::find(names.begin(), names.end(), "IllegalArgumentException") != names.end());
    EXPECT_TRUE(std::find(names.begin(), names.end(), "IOException") != names.end());
    EXPECT_TRUE(std::find(names.begin(), names.end(), "IllegalStateException") != names.end());
}

TEST(NaturalnessReport, FocalNamedSuiteOutranksNumberedSuite) {
    namespace fs = std::filesystem;
    auto model = cli_model();
    fs::path base = fs::temp_directory_path() / "testgen_suites";
    fs::remove_all(base);
    fs::create_directories(base / "named");
    fs::create_directories(base / "numbered");
    util::write_file((base / "named" / "OptionsTest.java").string(), R"(class OptionsTest {
    void testAddOption() {
        Options options = new Options();
        options.addOption("v");
        assertEquals("v", options.getName());
    }
})");
    util::write_file((base / "numbered" / "OptionsTest.java").string(), R"(class OptionsTest {
    void test01() {
        Options options = new Options();
        options.addOption("v");
        assertEquals("v", options.getName());
    }
})");
    auto report = naturalness_report(
        {{"named", (base / "named").string()}, {"numbered", (base / "numbered").string()}},
        model);
    ASSERT_EQ(report.suites.size(), 2u);
    EXPECT_GT(report.suites[0].overall.mean_name_score,
              report.suites[1].overall.mean_name_score);
    fs::remove_all(base);
}

TEST(NaturalnessReport, EmptySuiteIsFlagged) {
    namespace fs = std::filesystem;
    CodeModel empty_model;
    fs::path dir = fs::temp_directory_path() / "testgen_empty_suite";
    fs::remove_all(dir);
    fs::create_directories(dir);
    auto report = naturalness_report({{"empty", dir.string()}}, empty_model);
    ASSERT_EQ(report.suites.size(), 1u);
    EXPECT_TRUE(report.suites[0].overall.empty);
    EXPECT_EQ(report.suites[0].overall.tests, 0);
    fs::remove_all(dir);
}

TEST(NaturalnessReport, MixedLanguagesPartitioned) {
    namespace fs = std::filesystem;
    auto model = cli_model();
    fs::path dir = fs::temp_directory_path() / "testgen_mixed_suite";
    fs::remove_all(dir);
    fs::create_directories(dir);
    util::write_file((dir / "OptionsTest.java").string(),
                     "class OptionsTest { void testAddOption() { assertTrue(x); } }");
    util::write_file((dir / "test_timeutil.py").string(),
                     "def test_to_minutes():\n    assert to_minutes(1) == 60\n");
    auto report = naturalness_report({{"mixed", dir.string()}}, model);
    ASSERT_EQ(report.suites.size(), 1u);
    EXPECT_EQ(report.suites[0].per_language.size(), 2u);
    EXPECT_TRUE(report.suites[0].per_language.count("java"));
    EXPECT_TRUE(report.suites[0].per_language.count("python"));
    std::string json = report.to_json_text();
    EXPECT_NE(json.find("\"per_language\""), std::string::npos);
    fs::remove_all(dir);
}

TEST(NaturalnessReport, DeterministicOutput) {
    namespace fs = std::filesystem;
    auto model = cli_model();
    fs::path dir = fs::temp_directory_path() / "testgen_det_suite";
    fs::remove_all(dir);
    fs::create_directories(dir);
    util::write_file((dir / "OptionsTest.java").string(), R"(class OptionsTest {
    void testAddOption_setsName() {
        Options options = new Options();
        options.addOption("v");
        assertEquals("v", options.getName());
    }
})");
    auto r1 = naturalness_report({{"s", dir.string()}}, model);
    auto r2 = naturalness_report({{"s", dir.string()}}, model);
    EXPECT_EQ(r1.to_json_text(), r2.to_json_text());
    fs::remove_all(dir);
}

TEST(MetricsBounds, FuzzedTestFilesStayInRange) {
    std::mt19937 rng(29);
    std::uniform_int_distribution<int> tests(1, 4);
    std::uniform_int_distribution<int> stmts(1, 6);
    std::uniform_int_distribution<int> kind(0, 4);
    for (int i = 0; i < 40; ++i) {
        std::string src = "class FuzzTest {\n";
        int n = tests(rng);
        for (int t = 0; t < n; ++t) {
            src += "    void test" + std::to_string(t) + "() {\n";
            int s = stmts(rng);
            for (int k = 0; k < s; ++k) {
                switch (kind(rng)) {
                    case 0: src += "        run(" + std::to_string(k) + ");\n"; break;
                    case 1: src += "        assertEquals(a, b);\n"; break;
                    case 2: src += "        assertNull(x);\n"; break;
                    case 3: src += "        assertThrows(Error.class, () -> go());\n"; break;
                    default: src += "        int v" + std::to_string(k) + " = 1;\n"; break;
                }
            }
            src += "    }\n";
        }
        src += "}\n";
        auto unit = parse_test_file(src, "FuzzTest.java");
        AssertionMetrics m = assertion_metrics(*unit);
        EXPECT_GE(m.assertion_ratio, 0.0);
        EXPECT_LE(m.assertion_ratio, 1.0);
        for (double pct : {m.pct_no_assertions, m.pct_duplicate_assertions,
                           m.pct_null_assertions, m.pct_exception_assertions}) {
            EXPECT_GE(pct, 0.0);
            EXPECT_LE(pct, 100.0);
        }
    }
}
