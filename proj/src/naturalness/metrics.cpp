#include "testgen/naturalness/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <map>

#include "testgen/error.hpp"
#include "testgen/model/parser.hpp"
#include "testgen/naturalness/levenshtein.hpp"
#include "testgen/util/text.hpp"

namespace testgen::naturalness {

using model::Callable;
using model::CallableKind;
using model::CodeModel;
using model::CodeUnit;
using model::Language;
using model::TypeDecl;

namespace {

const std::set<std::string>& data_structure_types() {
    static const std::set<std::string> s = {
        "string", "str",     "char",   "character", "int",     "integer", "long",  "short",
        "byte",   "float",   "double", "boolean",   "bool",    "number",  "bytes", "list",
        "arraylist", "linkedlist", "map", "hashmap", "treemap", "set",     "hashset", "treeset",
        "dict",   "tuple",   "array",  "collection", "iterable", "vector", "stack", "queue",
        "deque",  "optional", "stream", "bigdecimal", "biginteger"};
    return s;
}

bool word_in(std::string_view line, std::string_view word) {
    size_t pos = 0;
    while ((pos = line.find(word, pos)) != std::string_view::npos) {
        bool left_ok = pos == 0 || !(std::isalnum(static_cast<unsigned char>(line[pos - 1])) ||
                                     line[pos - 1] == '_');
        size_t end = pos + word.size();
        bool right_ok = end >= line.size() ||
                        !(std::isalnum(static_cast<unsigned char>(line[end])) || line[end] == '_');
        if (left_ok && right_ok) return true;
        pos = end;
    }
    return false;
}

bool is_exception_assertion_line(std::string_view line) {
    return line.find("assertThrows") != std::string_view::npos ||
           line.find("assertDoesNotThrow") != std::string_view::npos ||
           line.find("assertRaises") != std::string_view::npos ||
           line.find("pytest.raises") != std::string_view::npos ||
           line.find("expectThrows") != std::string_view::npos;
}

bool is_null_assertion_line(std::string_view line, Language lang) {
    if (line.find("assertNull") != std::string_view::npos ||
        line.find("assertNotNull") != std::string_view::npos)
        return true;
    if (lang == Language::java) return word_in(line, "null");
    return word_in(line, "None");
}

std::string body_text(const Callable& c) {
    if (!c.unit || c.body_span.empty()) return "";
    return c.unit->source_text.substr(c.body_span.begin, c.body_span.length());
}

bool has_test_annotation(const Callable& c) {
    for (const auto& a : c.annotations) {
        if (a == "Test" || util::ends_with(a, ".Test") || a == "ParameterizedTest" ||
            a == "RepeatedTest")
            return true;
    }
    return false;
}

std::string strip_test_affixes(std::string name) {
    auto strip_suffix = [&](const std::string& suf) {
        if (name.size() > suf.size() && util::ends_with(name, suf))
            name = name.substr(0, name.size() - suf.size());
    };
    strip_suffix("TestCase");
    strip_suffix("Tests");
    strip_suffix("Test");
    strip_suffix("IT");
    if (util::starts_with(name, "Test") && name.size() > 4) name = name.substr(4);
    return name;
}

// Splits a segment such as "longArgs" into lower-cased camel tokens plus
// adjacent-pair merges: {long, args, longargs}.
std::vector<std::string> segment_tokens(const std::string& segment) {
    std::vector<std::string> base = util::split_identifier(segment);
    std::vector<std::string> out = base;
    for (size_t i = 0; i + 1 < base.size(); ++i) out.push_back(base[i] + base[i + 1]);
    return out;
}

bool exception_like_segment(const std::vector<std::string>& base_tokens) {
    static const std::set<std::string> markers = {"throw",  "throws", "thrown", "raise",
                                                  "raises", "exception", "error", "errors"};
    for (const auto& t : base_tokens)
        if (markers.count(t)) return true;
    return false;
}

double max_similarity(const std::string& token, const std::vector<std::string>& pool) {
    double best = 0.0;
    for (const auto& candidate : pool) {
        double s = normalized_similarity(token, candidate);
        if (s > best) best = s;  // strict: ties keep the earliest pool entry
    }
    return best;
}

std::vector<std::string> camel_suffix_forms(const std::string& name) {
    std::vector<std::string> out;
    std::vector<std::string> parts = util::split_identifier(name);
    for (size_t i = 0; i < parts.size(); ++i) {
        std::string joined;
        for (size_t j = i; j < parts.size(); ++j) joined += parts[j];
        out.push_back(joined);
    }
    if (out.empty()) out.push_back(util::to_lower(name));
    return out;
}

struct DeclaredVariable {
    std::string name;
    std::string type;  // empty for Python
    std::string initializer;
};

std::vector<DeclaredVariable> declared_variables(const Callable& test, Language lang) {
    std::vector<DeclaredVariable> out;
    std::string body = body_text(test);
    if (lang == Language::python) {
        for (const auto& line : util::split_lines(body)) {
            std::string t = util::trim(line);
            auto eq = t.find('=');
            if (eq == std::string::npos || eq == 0) continue;
            if (eq + 1 < t.size() && t[eq + 1] == '=') continue;
            if (t[eq - 1] == '!' || t[eq - 1] == '<' || t[eq - 1] == '>' || t[eq - 1] == '+')
                continue;
            std::string name = util::trim(t.substr(0, eq));
            if (name.empty() ||
                !std::all_of(name.begin(), name.end(), [](char c) {
                    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
                }))
                continue;
            if (std::isdigit(static_cast<unsigned char>(name[0]))) continue;
            out.push_back({name, "", util::trim(t.substr(eq + 1))});
        }
        return out;
    }
    // Java: "Type name = initializer;" statements; the parser already proved
    // these locals, re-derive the initializer text per local.
    for (const auto& local : test.locals) {
        for (const auto& line : util::split_lines(body)) {
            std::string t = util::trim(line);
            auto eq = t.find('=');
            if (eq == std::string::npos || eq == 0) continue;
            std::string lhs = util::trim(t.substr(0, eq));
            if (!util::ends_with(lhs, " " + local.name)) continue;
            if (lhs.find(local.type.base_name()) == std::string::npos) continue;
            std::string init = util::trim(t.substr(eq + 1));
            if (!init.empty() && init.back() == ';') init.pop_back();
            out.push_back({local.name, local.type.name, init});
            break;
        }
    }
    return out;
}

const Callable* resolve_called(const std::string& callee, int arity, bool constructor,
                               const CodeModel& model) {
    if (constructor) {
        std::string simple = callee;
        auto dot = simple.rfind('.');
        if (dot != std::string::npos) simple = simple.substr(dot + 1);
        if (const TypeDecl* t = model.find_type(simple)) {
            const Callable* best = nullptr;
            for (const Callable* c : t->constructors()) {
                if (static_cast<int>(c->params.size()) == arity) return c;
                if (!best) best = c;
            }
            return best;
        }
        return nullptr;
    }
    const Callable* best = nullptr;
    for (const auto& unit : model.units()) {
        for (const Callable* c : unit->all_callables()) {
            if (c->name != callee) continue;
            if (static_cast<int>(c->params.size()) == arity) return c;
            if (!best) best = c;
        }
    }
    return best;
}

}  // namespace

bool is_assertion_line(std::string_view line, Language lang) {
    std::string t = util::trim(line);
    if (t.empty()) return false;
    if (lang == Language::java) {
        if (util::starts_with(t, "assert")) return true;
        if (util::starts_with(t, "Assert.") || util::starts_with(t, "Assertions.")) return true;
        if (util::starts_with(t, "fail(") || util::starts_with(t, "fail ")) return true;
        if (t.find("assertThrows") != std::string::npos ||
            t.find("assertDoesNotThrow") != std::string::npos)
            return true;
        // assignments holding an assertThrows result still assert
        return false;
    }
    if (util::starts_with(t, "assert ") || util::starts_with(t, "assert(")) return true;
    if (util::starts_with(t, "self.assert") || util::starts_with(t, "self.fail")) return true;
    if (t.find("pytest.raises") != std::string::npos) return true;
    if (t.find(".assertRaises") != std::string::npos) return true;
    return false;
}

std::vector<const Callable*> find_test_methods(const CodeUnit& unit) {
    std::vector<const Callable*> out;
    if (unit.language == Language::java) {
        for (const auto& ty : unit.types) {
            for (const auto& c : ty->callables) {
                if (c->kind != CallableKind::method) continue;
                if (has_test_annotation(*c) || util::starts_with(util::to_lower(c->name), "test"))
                    out.push_back(c.get());
            }
        }
        return out;
    }
    for (const Callable* c : unit.all_callables()) {
        if (c->kind == CallableKind::constructor) continue;
        if (util::starts_with(c->name, "test")) out.push_back(c);
    }
    return out;
}

AssertionMetrics assertion_metrics(const CodeUnit& test_file) {
    auto tests = find_test_methods(test_file);
    if (tests.empty()) throw NotATestFileError("no test methods found in " + test_file.path);

    AssertionMetrics m;
    m.test_count = static_cast<int>(tests.size());
    std::string_view comment = test_file.language == Language::java ? "//" : "#";

    double ratio_sum = 0.0;
    int no_assert = 0, with_assert = 0, dup = 0, null_a = 0, exc = 0;

    for (const Callable* t : tests) {
        std::string body = body_text(*t);
        int executable = 0, assertions = 0;
        std::map<std::string, int> normalized_counts;
        bool has_dup = false, has_null = false, has_exc = false;
        for (const auto& line : util::split_lines(body)) {
            if (!util::is_code_line(line, comment)) continue;
            ++executable;
            if (!is_assertion_line(line, test_file.language)) continue;
            ++assertions;
            std::string normalized;
            for (char c : util::trim(line))
                if (!std::isspace(static_cast<unsigned char>(c))) normalized += c;
            if (++normalized_counts[normalized] == 2) has_dup = true;
            if (is_null_assertion_line(line, test_file.language)) has_null = true;
            if (is_exception_assertion_line(line)) has_exc = true;
        }
        if (executable > 0) ratio_sum += static_cast<double>(assertions) / executable;
        if (assertions == 0) {
            ++no_assert;
        } else {
            ++with_assert;
            if (has_dup) ++dup;
            if (has_null) ++null_a;
            if (has_exc) ++exc;
        }
    }

    m.assertion_ratio = m.test_count ? ratio_sum / m.test_count : 0.0;
    m.pct_no_assertions = 100.0 * no_assert / m.test_count;
    m.tests_with_assertions = with_assert;
    if (with_assert > 0) {
        m.pct_duplicate_assertions = 100.0 * dup / with_assert;
        m.pct_null_assertions = 100.0 * null_a / with_assert;
        m.pct_exception_assertions = 100.0 * exc / with_assert;
    }
    return m;
}

FocalCandidates infer_focal_methods(const CodeUnit& test_file, const CodeModel& model) {
    FocalCandidates out;
    if (test_file.language == Language::python) {
        // Any called name could be the focal function.
        std::set<std::string> seen;
        for (const Callable* c : test_file.all_callables()) {
            for (const auto& cs : c->call_sites) {
                if (seen.insert(cs.callee_name).second) out.names.push_back(cs.callee_name);
            }
        }
        return out;
    }

    std::string stem = test_file.path;
    auto slash = stem.find_last_of("/\\");
    if (slash != std::string::npos) stem = stem.substr(slash + 1);
    if (util::ends_with(stem, ".java")) stem = stem.substr(0, stem.size() - 5);
    if (stem.empty() && !test_file.types.empty()) stem = test_file.types.front()->simple_name();
    std::string focal_name = strip_test_affixes(stem);
    if (focal_name.empty()) return out;
    out.focal_class = model.find_type(focal_name);
    if (!out.focal_class) return out;

    std::set<std::string> testable;
    for (const Callable* m : out.focal_class->methods()) {
        if (!m->is_private()) testable.insert(m->name);
    }
    std::set<std::string> seen;
    for (const auto& ty : test_file.types) {
        for (const auto& c : ty->callables) {
            for (const auto& cs : c->call_sites) {
                if (!testable.count(cs.callee_name)) continue;
                if (!seen.insert(cs.callee_name).second) continue;
                out.names.push_back(cs.callee_name);
                if (const Callable* resolved = out.focal_class->find_callable(
                        cs.callee_name, cs.arg_count))
                    out.callables.push_back(resolved);
            }
        }
    }
    return out;
}

NameScore test_name_score(const std::string& test_name,
                          const std::vector<std::string>& candidates,
                          const std::vector<std::string>& code_identifiers,
                          const std::vector<std::string>& thrown_exceptions) {
    NameScore score;
    score.test_id = test_name;

    std::string working = test_name;
    std::string lower = util::to_lower(working);
    for (const auto& cand : candidates) {
        if (cand.empty()) continue;
        std::string lc = util::to_lower(cand);
        auto pos = lower.find(lc);
        if (pos != std::string::npos) {
            score.focal_match = true;
            working = working.substr(0, pos) + working.substr(pos + lc.size());
            break;
        }
    }

    // Residual tokenization: underscore segments, "test" keywords dropped,
    // camel split with adjacent-pair merges per segment.
    std::vector<std::string> identifier_forms;
    for (const auto& id : code_identifiers) identifier_forms.push_back(util::to_lower(id));
    std::vector<std::string> exception_forms;
    for (const auto& ex : thrown_exceptions) {
        for (const auto& form : camel_suffix_forms(ex)) exception_forms.push_back(form);
        for (const auto& tok : segment_tokens(ex)) exception_forms.push_back(tok);
    }

    double sim_sum = 0.0;
    int token_count = 0;
    for (auto& segment : util::split(working, '_')) {
        std::string seg = util::trim(segment);
        if (seg.empty()) continue;
        std::vector<std::string> base = util::split_identifier(seg);
        base.erase(std::remove_if(base.begin(), base.end(),
                                  [](const std::string& t) {
                                      return t == "test" || t == "tests";
                                  }),
                   base.end());
        if (base.empty()) continue;
        std::vector<std::string> tokens = base;
        for (size_t i = 0; i + 1 < base.size(); ++i) tokens.push_back(base[i] + base[i + 1]);

        if (exception_like_segment(base)) {
            for (const auto& tok : tokens) {
                score.exception_tokens.push_back(tok);
                sim_sum += max_similarity(tok, exception_forms);
                ++token_count;
            }
        } else {
            for (const auto& tok : tokens) {
                score.residual_tokens.push_back(tok);
                sim_sum += max_similarity(tok, identifier_forms);
                ++token_count;
            }
        }
    }

    // An empty residual leaves nothing to contradict the name; the closeness
    // half is granted in full.
    score.token_closeness = token_count == 0 ? 1.0 : sim_sum / token_count;
    score.total = 0.5 * (score.focal_match ? 1.0 : 0.0) + 0.5 * score.token_closeness;
    return score;
}

std::vector<std::string> thrown_exception_names(const Callable& test_method) {
    std::vector<std::string> out;
    std::set<std::string> seen;
    std::string body = body_text(test_method);
    auto add = [&](std::string name) {
        name = util::trim(name);
        while (!name.empty() && !std::isalnum(static_cast<unsigned char>(name.back())))
            name.pop_back();
        auto dot = name.rfind('.');
        if (dot != std::string::npos) name = name.substr(dot + 1);
        if (!name.empty() && seen.insert(name).second) out.push_back(name);
    };
    auto scan_for = [&](const std::string& marker, char stop) {
        size_t pos = 0;
        while ((pos = body.find(marker, pos)) != std::string::npos) {
            pos += marker.size();
            size_t end = pos;
            while (end < body.size() && body[end] != stop && body[end] != ')' &&
                   body[end] != ',' && body[end] != '\n' && body[end] != ' ')
                ++end;
            add(body.substr(pos, end - pos));
            pos = end;
        }
    };
    scan_for("throw new ", '(');
    scan_for("assertThrows(", '.');
    scan_for("expectThrows(", '.');
    scan_for("catch (", ' ');
    scan_for("pytest.raises(", ')');
    scan_for("assertRaises(", ')');
    scan_for("raise ", '(');
    // "except ValueError:" / "except (A, B):"
    size_t pos = 0;
    while ((pos = body.find("except ", pos)) != std::string::npos) {
        pos += 7;
        size_t end = pos;
        while (end < body.size() && body[end] != ':' && body[end] != '\n') ++end;
        std::string clause = body.substr(pos, end - pos);
        for (auto& part : util::split(clause, ',')) {
            std::string p = util::trim(part);
            if (!p.empty() && p.front() == '(') p = p.substr(1);
            if (!p.empty() && p.back() == ')') p.pop_back();
            auto as_pos = p.find(" as ");
            if (as_pos != std::string::npos) p = p.substr(0, as_pos);
            add(p);
        }
        pos = end;
    }
    return out;
}

TestVariableScores variable_name_score(const Callable& test_method, const CodeModel& model) {
    TestVariableScores out;
    Language lang = test_method.unit ? test_method.unit->language : Language::java;
    auto vars = declared_variables(test_method, lang);

    for (const auto& var : vars) {
        VariableScore vs;
        vs.name = var.name;
        vs.declared_type = var.type;

        std::string base_type = model::TypeRef{var.type, "", model::TypeClass::unresolved}
                                    .base_name();
        bool is_array = util::ends_with(var.type, "[]");
        std::string lower_type = util::to_lower(base_type);
        vs.data_structure_group =
            var.type.empty() || is_array || data_structure_types().count(lower_type) > 0;

        // Context: the initializing call's name plus its formal parameter
        // names, resolved against the model when possible.
        std::vector<std::string> pool;
        auto calls = model::scan_calls(var.initializer, lang);
        if (!calls.empty()) {
            const auto& call = calls.front();
            std::string callee = call.callee_name;
            auto dot = callee.rfind('.');
            std::string simple_callee =
                dot == std::string::npos ? callee : callee.substr(dot + 1);
            pool.push_back(util::to_lower(simple_callee));
            if (const Callable* target = resolve_called(simple_callee, call.arg_count,
                                                        call.is_constructor, model)) {
                for (const auto& p : target->params) pool.push_back(util::to_lower(p.name));
            }
        }
        if (!vs.data_structure_group) {
            for (const auto& form : camel_suffix_forms(base_type)) pool.push_back(form);
        }

        double best = 0.0;
        for (const auto& entry : pool) {
            double s = normalized_similarity(util::to_lower(var.name), entry);
            if (s > best) best = s;
        }
        vs.score = best;
        out.variables.push_back(std::move(vs));
    }

    if (!out.variables.empty()) {
        out.has_variables = true;
        double sum = 0.0;
        for (const auto& v : out.variables) sum += v.score;
        out.mean = sum / out.variables.size();
    }
    return out;
}

std::vector<std::string> identifier_pool(const CodeUnit& test_file,
                                         const FocalCandidates& candidates,
                                         const CodeModel& model) {
    std::vector<std::string> out;
    std::set<std::string> seen;
    auto add = [&](const std::string& name) {
        if (!name.empty() && seen.insert(name).second) out.push_back(name);
    };

    auto add_type = [&](const TypeDecl* ty) {
        if (!ty) return;
        add(ty->simple_name());
        for (const auto& f : ty->fields) add(f->name);
        for (const auto& c : ty->callables) {
            add(c->name);
            for (const auto& p : c->params) add(p.name);
        }
    };

    if (test_file.language == Language::java) {
        add_type(candidates.focal_class);
        if (candidates.focal_class && candidates.focal_class->unit) {
            for (const auto& imp : candidates.focal_class->unit->imports)
                add(imp.simple_name());
        }
    } else {
        // Imported in-model modules play the focal-class role.
        for (const auto& imp : test_file.imports) {
            std::string mod = imp.qualified;
            auto dot = mod.rfind('.');
            if (const CodeUnit* m = model.find_module(mod)) {
                for (const auto& ty : m->types) add_type(ty.get());
                for (const auto& f : m->functions) {
                    add(f->name);
                    for (const auto& p : f->params) add(p.name);
                }
            } else if (dot != std::string::npos) {
                if (const CodeUnit* m2 = model.find_module(mod.substr(0, dot))) {
                    for (const auto& ty : m2->types) add_type(ty.get());
                    for (const auto& f : m2->functions) {
                        add(f->name);
                        for (const auto& p : f->params) add(p.name);
                    }
                }
            }
            add(imp.simple_name());
        }
    }
    for (const auto& imp : test_file.imports) add(imp.simple_name());
    for (const auto& name : candidates.names) add(name);
    for (const Callable* c : candidates.callables) {
        for (const auto& p : c->params) add(p.name);
    }
    return out;
}

}  // namespace testgen::naturalness
