#include <gtest/gtest.h>

#include "testgen/error.hpp"
#include "testgen/model/parser.hpp"
#include "testgen/pipeline/sanitize.hpp"

using namespace testgen;
using namespace testgen::pipeline;
using testgen::model::Language;

TEST(Sanitize, ExtractsFencedJavaBlock) {
    std::string raw = "Here is the test:\n```java\nclass T { void testIt() { run(); } }\n```\n"
                      "Let me know if you need more.";
    std::string out = sanitize(raw, Language::java);
    EXPECT_EQ(out.find("Here is"), std::string::npos);
    EXPECT_NE(out.find("class T"), std::string::npos);
    EXPECT_TRUE(model::parses(out, Language::java));
}

TEST(Sanitize, PureCodePassesThroughUnchanged) {
    std::string raw = "class T { void testIt() { run(); } }";
    EXPECT_EQ(sanitize(raw, Language::java), raw);
}

TEST(Sanitize, ProseIsUnsalvageable) {
    EXPECT_THROW(sanitize("I am unable to produce a test for this method because "
                          "the specification is unclear.",
                          Language::java),
                 UnsalvageableError);
    EXPECT_THROW(sanitize("", Language::java), UnsalvageableError);
}

TEST(Sanitize, WrapsBareJavaMethodsInTestClass) {
    std::string raw = R"(import org.junit.jupiter.api.Test;

@Test
public void testAdd() {
    assertEquals(2, 1 + 1);
}
)";
    std::string out = sanitize(raw, Language::java);
    EXPECT_NE(out.find("public class GeneratedTest"), std::string::npos);
    EXPECT_TRUE(model::parses(out, Language::java));
    // import hoisted above the wrapper class
    EXPECT_LT(out.find("import org.junit"), out.find("class GeneratedTest"));
}

TEST(Sanitize, UntaggedFenceAccepted) {
    std::string raw = "```\ndef test_x():\n    assert 1 == 1\n```";
    std::string out = sanitize(raw, Language::python);
    EXPECT_NE(out.find("def test_x"), std::string::npos);
}

TEST(Sanitize, PrefersBlockTaggedWithLanguage) {
    std::string raw = "```text\nnot code at all !!!\n```\nand\n```python\ndef test_y():\n"
                      "    assert 2 == 2\n```";
    std::string out = sanitize(raw, Language::python);
    EXPECT_NE(out.find("def test_y"), std::string::npos);
    EXPECT_EQ(out.find("not code"), std::string::npos);
}

TEST(Sanitize, LongestParseableRegionWithoutFences) {
    std::string raw = "The method under test needs three cases covered!\n"
                      "class T {\n    void testA() { go(); }\n    void testB() { go(); }\n}\n"
                      "Hope that helps?!";
    std::string out = sanitize(raw, Language::java);
    EXPECT_EQ(out.find("Hope"), std::string::npos);
    EXPECT_EQ(out.find("three cases"), std::string::npos);
    EXPECT_NE(out.find("testA"), std::string::npos);
    EXPECT_NE(out.find("testB"), std::string::npos);
}

TEST(Sanitize, DuplicateImportsCollapsed) {
    std::string raw = "import a.B;\nimport a.B;\nclass T { void testIt() {} }\n";
    std::string out = sanitize(raw, Language::java);
    EXPECT_EQ(out.find("import a.B;"), out.rfind("import a.B;"));
}

TEST(Sanitize, PythonProseAroundCode) {
    std::string raw = "Sure! The tests below cover both branches.\n\n"
                      "def test_neg():\n    assert classify(-1) == 'negative'\n\n"
                      "Those should pass.";
    std::string out = sanitize(raw, Language::python);
    EXPECT_NE(out.find("def test_neg"), std::string::npos);
    EXPECT_EQ(out.find("Sure!"), std::string::npos);
}
