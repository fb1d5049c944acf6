#pragma once

#include <string>
#include <vector>

#include "testgen/model/model.hpp"

namespace testgen::analysis {

// A whole module selected for test generation, all declarations included
// regardless of underscore visibility.
struct ModuleTarget {
    const model::CodeUnit* module = nullptr;
    std::vector<const model::TypeDecl*> member_types;
    std::vector<const model::Callable*> member_callables;

    size_t member_count() const { return member_types.size() + member_callables.size(); }
    std::string id() const { return module ? module->package_name : ""; }
};

struct FewShotExample {
    std::string name;
    std::string focal_snippet;
    std::string test_snippet;
};

struct FewShotConfig {
    // Directory of <name>.focal.py / <name>.test.py pairs; empty means the
    // bundled defaults.
    std::string corpus_dir;
    std::vector<std::string> names;  // selection and order; empty = all bundled
    int count = 2;
};

ModuleTarget compute_module_scope(const model::CodeUnit& module);

// Constructor signatures of classes in in-model imported modules; unresolved
// imports are skipped.
struct ImportedConstructor {
    const model::TypeDecl* type = nullptr;
    const model::Callable* constructor = nullptr;  // null for implicit __init__
    std::string signature() const;
};
std::vector<ImportedConstructor> collect_imported_constructors(const model::CodeUnit& module,
                                                               const model::CodeModel& model);

// Deterministic, configuration-ordered example list. Throws ConfigError when a
// configured example file is missing or does not parse.
std::vector<FewShotExample> select_fewshot_examples(const FewShotConfig& config);

const std::vector<FewShotExample>& bundled_fewshot_examples();

}  // namespace testgen::analysis
