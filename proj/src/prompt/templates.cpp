#include "testgen/prompt/templates.hpp"

#include <filesystem>

#include "testgen/error.hpp"
#include "testgen/util/text.hpp"

namespace testgen::prompt {

namespace {

std::map<std::string, std::string> builtin_files() {
    std::map<std::string, std::string> f;

    f["preamble_generation_java.txt"] =
        "You are an expert Java developer. Write a complete, compilable JUnit 5 test class "
        "for the focal method described below. Use only the constructors, accessors, and "
        "mocks provided. Return a single fenced ```java code block.";

    f["preamble_generation_python.txt"] =
        "You are an expert Python developer. Write complete pytest test functions for the "
        "module shown below. Exercise the public behavior of every class and function. "
        "Return a single fenced ```python code block.";

    f["preamble_repair.txt"] =
        "The previously generated test is broken. Fix the problem described in the feedback "
        "and return the full corrected test file in one fenced code block.";

    f["preamble_coverage.txt"] =
        "The current tests leave part of the focal code uncovered. Write additional tests "
        "that execute the uncovered lines listed in the feedback. Return the new tests in "
        "one fenced code block.";

    f["guidance_java.txt"] =
        "Name each test method after the focal method and the scenario it checks.\n"
        "Assert on observable state or return values; avoid asserting on internals.\n"
        "Use org.junit.jupiter.api imports and Mockito for any mocks shown above.";

    f["guidance_python.txt"] =
        "Name each test function test_<function>_<scenario>.\n"
        "Use plain assert statements and pytest.raises for expected exceptions.\n"
        "Import the module under test by its module name.";

    f["section_fewshot.txt"] = "### Example tests\n{{content}}";
    f["section_a.txt"] = "### Relevant constructors\n{{content}}";
    f["section_b.txt"] = "### Accessor methods\n{{content}}";
    f["section_c.txt"] = "### Testing guidance\n{{content}}";
    f["section_d.txt"] = "### Focal code under test\n{{content}}";
    f["section_e.txt"] = "### Call chains reaching private methods\n{{content}}";
    f["section_f.txt"] = "### Mocked fields and types\n{{content}}";
    f["section_g.txt"] = "### Mockable constructor and static calls\n{{content}}";
    f["section_h.txt"] = "### Mockable API calls\n{{content}}";
    f["section_feedback.txt"] = "### Feedback\n{{content}}";

    return f;
}

}  // namespace

const TemplateSet& TemplateSet::builtin() {
    static const TemplateSet set = [] {
        TemplateSet s;
        s.version_ = "v1";
        s.files_ = builtin_files();
        return s;
    }();
    return set;
}

TemplateSet TemplateSet::load_dir(const std::string& dir) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir)) throw ConfigError("template directory not found: " + dir);
    TemplateSet s = builtin();
    fs::path version_file = fs::path(dir) / "VERSION";
    if (fs::exists(version_file)) s.version_ = util::trim(util::read_file(version_file.string()));
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        std::string name = entry.path().filename().string();
        if (name == "VERSION") continue;
        if (!util::ends_with(name, ".txt")) continue;
        s.files_[name] = util::read_file(entry.path().string());
    }
    return s;
}

const std::string& TemplateSet::get(const std::string& name) const {
    auto it = files_.find(name);
    if (it == files_.end()) throw ConfigError("unknown prompt template: " + name);
    return it->second;
}

void TemplateSet::write_dir(const std::string& dir) const {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    util::write_file((fs::path(dir) / "VERSION").string(), version_ + "\n");
    for (const auto& [name, text] : files_) {
        util::write_file((fs::path(dir) / name).string(), text);
    }
}

}  // namespace testgen::prompt
