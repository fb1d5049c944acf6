#include "testgen/analysis/python_analysis.hpp"

#include <filesystem>
#include <set>

#include "testgen/error.hpp"
#include "testgen/model/parser.hpp"
#include "testgen/util/text.hpp"

namespace testgen::analysis {

using model::Callable;
using model::CallableKind;
using model::CodeModel;
using model::CodeUnit;
using model::TypeDecl;

std::string ImportedConstructor::signature() const {
    std::string out = type ? type->simple_name() : "?";
    out += "(";
    if (constructor) {
        bool first = true;
        for (const auto& p : constructor->params) {
            if (!first) out += ", ";
            first = false;
            out += p.name;
        }
    }
    out += ")";
    return out;
}

ModuleTarget compute_module_scope(const CodeUnit& module) {
    ModuleTarget t;
    t.module = &module;
    for (const auto& ty : module.types) {
        t.member_types.push_back(ty.get());
        for (const auto& c : ty->callables) t.member_callables.push_back(c.get());
    }
    for (const auto& f : module.functions) t.member_callables.push_back(f.get());
    return t;
}

std::vector<ImportedConstructor> collect_imported_constructors(const CodeUnit& module,
                                                               const CodeModel& model) {
    std::vector<ImportedConstructor> out;
    std::set<const TypeDecl*> seen;

    auto add_class = [&](const TypeDecl* ty) {
        if (!ty || !seen.insert(ty).second) return;
        auto ctors = ty->constructors();
        if (ctors.empty()) {
            out.push_back({ty, nullptr});
        } else {
            for (const Callable* c : ctors) out.push_back({ty, c});
        }
    };

    for (const auto& imp : module.imports) {
        // "import shapes" -> all classes of the module; "from shapes import
        // Circle" -> that class if it resolves.
        if (const CodeUnit* m = model.find_module(imp.qualified)) {
            if (m == &module) continue;
            for (const auto& ty : m->types) add_class(ty.get());
            continue;
        }
        auto dot = imp.qualified.rfind('.');
        if (dot != std::string::npos) {
            std::string mod = imp.qualified.substr(0, dot);
            std::string item = imp.qualified.substr(dot + 1);
            if (const CodeUnit* m = model.find_module(mod)) {
                if (m == &module) continue;
                if (imp.wildcard) {
                    for (const auto& ty : m->types) add_class(ty.get());
                } else {
                    for (const auto& ty : m->types)
                        if (ty->simple_name() == item) add_class(ty.get());
                }
            }
        }
    }
    return out;
}

namespace {

const char* kClampFocal = R"(def clamp(value, low, high):
    if value < low:
        return low
    if value > high:
        return high
    return value
)";

const char* kClampTest = R"(import pytest

from ranges import clamp


def test_clamp_returns_value_inside_bounds():
    assert clamp(5, 0, 10) == 5


def test_clamp_caps_value_above_high_bound():
    assert clamp(42, 0, 10) == 10


def test_clamp_raises_nothing_for_equal_bounds():
    assert clamp(3, 3, 3) == 3
)";

const char* kAccountFocal = R"(class Account:
    def __init__(self, owner, balance=0):
        self.owner = owner
        self.balance = balance

    def deposit(self, amount):
        if amount <= 0:
            raise ValueError("amount must be positive")
        self.balance += amount
        return self.balance
)";

const char* kAccountTest = R"(import pytest

from bank import Account


def test_deposit_increases_balance():
    account = Account("ada", 10)
    new_balance = account.deposit(5)
    assert new_balance == 15


def test_deposit_rejects_non_positive_amount():
    account = Account("ada")
    with pytest.raises(ValueError):
        account.deposit(0)
)";

}  // namespace

const std::vector<FewShotExample>& bundled_fewshot_examples() {
    static const std::vector<FewShotExample> examples = {
        {"clamp", kClampFocal, kClampTest},
        {"account", kAccountFocal, kAccountTest},
    };
    return examples;
}

std::vector<FewShotExample> select_fewshot_examples(const FewShotConfig& config) {
    std::vector<FewShotExample> out;

    if (config.corpus_dir.empty()) {
        const auto& bundled = bundled_fewshot_examples();
        if (config.names.empty()) {
            for (const auto& ex : bundled) {
                if (static_cast<int>(out.size()) >= config.count) break;
                out.push_back(ex);
            }
        } else {
            for (const auto& name : config.names) {
                bool found = false;
                for (const auto& ex : bundled) {
                    if (ex.name == name) {
                        out.push_back(ex);
                        found = true;
                    }
                }
                if (!found) throw ConfigError("unknown bundled few-shot example: " + name);
            }
        }
        return out;
    }

    namespace fs = std::filesystem;
    std::vector<std::string> names = config.names;
    if (names.empty()) {
        if (!fs::is_directory(config.corpus_dir))
            throw ConfigError("few-shot corpus directory not found: " + config.corpus_dir);
        for (const auto& entry : fs::directory_iterator(config.corpus_dir)) {
            std::string fn = entry.path().filename().string();
            if (util::ends_with(fn, ".focal.py"))
                names.push_back(fn.substr(0, fn.size() - 9));
        }
        std::sort(names.begin(), names.end());
    }
    for (const auto& name : names) {
        if (static_cast<int>(out.size()) >= config.count && config.names.empty()) break;
        fs::path focal = fs::path(config.corpus_dir) / (name + ".focal.py");
        fs::path test = fs::path(config.corpus_dir) / (name + ".test.py");
        if (!fs::exists(focal) || !fs::exists(test))
            throw ConfigError("few-shot example files missing for: " + name);
        FewShotExample ex;
        ex.name = name;
        ex.focal_snippet = util::read_file(focal.string());
        ex.test_snippet = util::read_file(test.string());
        if (!model::parses(ex.focal_snippet, model::Language::python) ||
            !model::parses(ex.test_snippet, model::Language::python))
            throw ConfigError("few-shot example does not parse: " + name);
        out.push_back(std::move(ex));
    }
    return out;
}

}  // namespace testgen::analysis
