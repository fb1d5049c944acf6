#include "testgen/analysis/java_analysis.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <map>
#include <set>

#include "testgen/error.hpp"
#include "testgen/util/text.hpp"

namespace testgen::analysis {

using model::Callable;
using model::CallableKind;
using model::CallSite;
using model::CodeModel;
using model::FieldDecl;
using model::TypeClass;
using model::TypeDecl;
using model::TypeRef;
using model::Visibility;

namespace {

bool testable_visibility(Visibility v) {
    return v == Visibility::public_vis || v == Visibility::protected_vis ||
           v == Visibility::package_vis;
}

bool declares_same(const TypeDecl& cls, const Callable& m) {
    for (const auto& c : cls.callables) {
        if (c->kind != CallableKind::constructor && c->name == m.name &&
            c->params.size() == m.params.size())
            return true;
    }
    return false;
}

std::string canonical_type_key(const TypeRef& ref) {
    return ref.resolved_name.empty() ? ref.base_name() : ref.resolved_name;
}

// Ancestors of cls resolvable in the model (superclass chain plus interfaces,
// transitively), in deterministic walk order.
std::vector<const TypeDecl*> model_ancestors(const TypeDecl& cls, const CodeModel& model) {
    std::vector<const TypeDecl*> out;
    std::set<const TypeDecl*> seen;
    std::deque<const TypeDecl*> work{&cls};
    while (!work.empty()) {
        const TypeDecl* cur = work.front();
        work.pop_front();
        std::vector<const TypeRef*> supers;
        if (cur->superclass) supers.push_back(&*cur->superclass);
        for (const auto& i : cur->interfaces) supers.push_back(&i);
        for (const TypeRef* s : supers) {
            auto res = model.resolve_type(*s);
            if (res.decl && seen.insert(res.decl).second) {
                out.push_back(res.decl);
                work.push_back(res.decl);
            }
        }
    }
    return out;
}

// Supertype names (resolved or as written) that do not resolve in the model.
std::vector<std::string> external_ancestor_names(const TypeDecl& cls, const CodeModel& model) {
    std::vector<std::string> out;
    std::set<const TypeDecl*> seen;
    std::deque<const TypeDecl*> work{&cls};
    while (!work.empty()) {
        const TypeDecl* cur = work.front();
        work.pop_front();
        std::vector<const TypeRef*> supers;
        if (cur->superclass) supers.push_back(&*cur->superclass);
        for (const auto& i : cur->interfaces) supers.push_back(&i);
        for (const TypeRef* s : supers) {
            auto res = model.resolve_type(*s);
            if (res.decl) {
                if (seen.insert(res.decl).second) work.push_back(res.decl);
            } else {
                out.push_back(canonical_type_key(*s));
            }
        }
    }
    return out;
}

std::string lower_first(std::string s) {
    if (!s.empty()) s[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(s[0])));
    return s;
}

std::string default_value_for(const TypeRef& t) {
    std::string base = t.base_name();
    if (t.is_array()) return "null";
    if (base == "int" || base == "long" || base == "short" || base == "byte") return "0";
    if (base == "float" || base == "double") return "0.0";
    if (base == "boolean") return "false";
    if (base == "char") return "' '";
    return "null";
}

}  // namespace

std::string FocalTarget::id() const {
    std::string out = focal_class ? focal_class->qualified_name : "";
    if (focal_method) {
        out += "." + focal_method->name + "(";
        for (size_t i = 0; i < focal_method->params.size(); ++i) {
            if (i) out += ",";
            out += focal_method->params[i].type.name;
        }
        out += ")";
    }
    return out;
}

std::string CallChain::render() const {
    std::vector<std::string> parts;
    for (const auto* c : path) parts.push_back(c->signature());
    return util::join(parts, " -> ");
}

std::vector<FocalTarget> compute_testing_scope(const TypeDecl& focal_class,
                                               const CodeModel& model) {
    std::vector<FocalTarget> out;
    if (focal_class.is_abstract()) {
        for (const auto& c : focal_class.callables) {
            if (c->kind == CallableKind::method && c->is_static && !c->is_abstract)
                out.push_back({c.get(), &focal_class, false});
        }
        return out;
    }
    for (const auto& c : focal_class.callables) {
        if (c->kind != CallableKind::method) continue;
        if (c->is_abstract) continue;
        if (!testable_visibility(c->visibility)) continue;
        out.push_back({c.get(), &focal_class, false});
    }
    // Concrete implementations inherited from abstract ancestors, stopping at
    // the first concrete superclass (its methods belong to its own scope).
    const TypeDecl* cur = &focal_class;
    std::vector<const TypeDecl*> walked{&focal_class};
    while (cur->superclass) {
        auto res = model.resolve_type(*cur->superclass);
        if (!res.decl) break;
        const TypeDecl* super = res.decl;
        if (!super->is_abstract()) break;
        for (const auto& c : super->callables) {
            if (c->kind != CallableKind::method) continue;
            if (c->is_abstract || c->is_static) continue;
            if (!testable_visibility(c->visibility)) continue;
            bool overridden = false;
            for (const TypeDecl* closer : walked)
                if (declares_same(*closer, *c)) overridden = true;
            if (!overridden) out.push_back({c.get(), &focal_class, true});
        }
        walked.push_back(super);
        cur = super;
    }
    return out;
}

std::vector<const Callable*> collect_relevant_constructors(const FocalTarget& target,
                                                           const CodeModel& model,
                                                           const AnalysisConfig& cfg) {
    std::vector<const Callable*> out;
    std::set<const Callable*> seen;
    std::set<const TypeDecl*> visited;
    std::deque<std::pair<const TypeDecl*, int>> work;

    auto enqueue = [&](const TypeDecl* t, int depth) {
        if (t && visited.insert(t).second) work.emplace_back(t, depth);
    };

    if (target.focal_method && !target.focal_method->is_static)
        enqueue(target.focal_class, 0);
    if (target.focal_method) {
        for (const auto& p : target.focal_method->params) {
            auto res = model.resolve_type(p.type);
            if (res.classification == TypeClass::application) enqueue(res.decl, 0);
        }
    }

    while (!work.empty()) {
        auto [type, depth] = work.front();
        work.pop_front();
        for (const Callable* ctor : type->constructors()) {
            if (!seen.insert(ctor).second) continue;
            out.push_back(ctor);
            if (cfg.max_constructor_depth > 0 && depth + 1 > cfg.max_constructor_depth) continue;
            for (const auto& p : ctor->params) {
                auto res = model.resolve_type(p.type);
                if (res.classification == TypeClass::application) enqueue(res.decl, depth + 1);
            }
        }
    }
    return out;
}

namespace {

enum class AccessorKind { none, getter, setter };

AccessorKind classify_accessor(const Callable& c) {
    if (c.kind != CallableKind::method || c.is_private()) return AccessorKind::none;
    const std::string& n = c.name;
    bool looks_setter = util::starts_with(n, "set") && n.size() > 3 && c.params.size() == 1;
    bool looks_getter = ((util::starts_with(n, "get") && n.size() > 3) ||
                         (util::starts_with(n, "is") && n.size() > 2)) &&
                        c.params.empty() && c.return_type.base_name() != "void";
    // Naming convention wins; body shape is the fallback.
    if (looks_setter) return AccessorKind::setter;
    if (looks_getter) return AccessorKind::getter;
    if (c.body_span.empty() || !c.unit) return AccessorKind::none;
    std::string body = util::trim(std::string(c.unit->source_text)
                                      .substr(c.body_span.begin, c.body_span.length()));
    if (c.params.size() == 1 && body.size() < 80) {
        // single "field = param;" (optionally this-qualified) statement
        auto eq = body.find('=');
        auto semi = body.find(';');
        if (eq != std::string::npos && semi != std::string::npos && semi == body.size() - 1) {
            std::string rhs = util::trim(body.substr(eq + 1, semi - eq - 1));
            if (rhs == c.params[0].name && body.find("==") == std::string::npos)
                return AccessorKind::setter;
        }
    }
    if (c.params.empty() && util::starts_with(body, "return ") && body.size() < 60 &&
        body.find('(') == std::string::npos) {
        return AccessorKind::getter;
    }
    return AccessorKind::none;
}

}  // namespace

AccessorSet collect_auxiliary_methods(const FocalTarget& target, const CodeModel& model) {
    AccessorSet out;
    std::set<const Callable*> seen;

    auto add_from = [&](const TypeDecl* type, bool setters, bool getters) {
        if (!type) return;
        for (const auto& c : type->callables) {
            AccessorKind k = classify_accessor(*c);
            if (k == AccessorKind::none || !seen.insert(c.get()).second) continue;
            if (k == AccessorKind::setter && setters) out.setters.push_back(c.get());
            if (k == AccessorKind::getter && getters) out.getters.push_back(c.get());
        }
    };

    add_from(target.focal_class, true, true);
    if (target.focal_method) {
        for (const auto& p : target.focal_method->params) {
            auto res = model.resolve_type(p.type);
            if (res.classification == TypeClass::application) add_from(res.decl, true, false);
        }
        auto ret = model.resolve_type(target.focal_method->return_type);
        if (ret.classification == TypeClass::application) add_from(ret.decl, false, true);
    }
    return out;
}

std::vector<CallChain> find_private_call_chains(const TypeDecl& focal_class) {
    std::vector<CallChain> out;
    auto graph = model::build_class_call_graph(focal_class);

    for (const auto& entry : focal_class.callables) {
        if (entry->kind != CallableKind::method || entry->is_private()) continue;
        // BFS with predecessor tracking gives the shortest chain per target.
        std::map<const Callable*, const Callable*> pred;
        std::deque<const Callable*> work{entry.get()};
        std::set<const Callable*> seen{entry.get()};
        std::vector<const Callable*> reached_privates;
        while (!work.empty()) {
            const Callable* cur = work.front();
            work.pop_front();
            for (const Callable* next : graph.successors(cur)) {
                if (!seen.insert(next).second) continue;
                pred[next] = cur;
                if (next->is_private() && next->kind == CallableKind::method)
                    reached_privates.push_back(next);
                work.push_back(next);
            }
        }
        // Report chains in declaration order of the private target.
        std::vector<const Callable*> ordered;
        for (const auto& c : focal_class.callables)
            if (std::find(reached_privates.begin(), reached_privates.end(), c.get()) !=
                reached_privates.end())
                ordered.push_back(c.get());
        for (const Callable* target : ordered) {
            CallChain chain;
            chain.entry = entry.get();
            std::vector<const Callable*> rev{target};
            const Callable* cur = target;
            while (cur != entry.get()) {
                cur = pred.at(cur);
                rev.push_back(cur);
            }
            chain.path.assign(rev.rbegin(), rev.rend());
            out.push_back(std::move(chain));
        }
    }
    return out;
}

MockedFieldsAndTypes identify_mocked_fields_and_types(const Callable& focal_method,
                                                      const TypeDecl& focal_class,
                                                      const ApiAllowlist& mockable_apis,
                                                      const CodeModel& model) {
    MockedFieldsAndTypes out;

    for (const auto& f : focal_class.fields) {
        if (mockable_apis.matches(f->declared_type)) out.mockable_fields.push_back(f.get());
    }

    // Worklist seeded with the focal class and the focal method's formal
    // parameter types; each popped type is kept if it is a mockable API, and
    // its constructors' parameter types are enqueued either way.
    std::deque<TypeRef> work;
    std::set<std::string> visited;
    std::set<std::string> emitted;

    auto push = [&](const TypeRef& ref) {
        std::string key = canonical_type_key(ref);
        if (key.empty() || !visited.insert(key).second) return;
        work.push_back(ref);
    };

    TypeRef self{focal_class.simple_name(), focal_class.qualified_name, TypeClass::application};
    push(self);
    for (const auto& p : focal_method.params) push(p.type);

    while (!work.empty()) {
        TypeRef t = work.front();
        work.pop_front();
        if (mockable_apis.matches(t) && emitted.insert(canonical_type_key(t)).second)
            out.mockable_types.push_back(t);
        auto res = model.resolve_type(t);
        if (!res.decl) continue;
        for (const Callable* ctor : res.decl->constructors())
            for (const auto& p : ctor->params) push(p.type);
    }
    return out;
}

bool is_service_entry_class(const TypeDecl& cls, const AnalysisConfig& cfg,
                            const CodeModel& model) {
    if (cfg.service_entry_types.empty()) return false;
    for (const TypeDecl* anc : model_ancestors(cls, model)) {
        TypeRef ref{anc->simple_name(), anc->qualified_name, TypeClass::application};
        if (cfg.service_entry_types.matches(ref)) return true;
    }
    for (const auto& name : external_ancestor_names(cls, model)) {
        if (cfg.service_entry_types.matches_name(name)) return true;
    }
    return false;
}

bool is_overridden(const Callable& method, const AnalysisConfig& cfg, const CodeModel& model) {
    if (!method.owner || method.kind != CallableKind::method) return false;
    const TypeDecl& cls = *method.owner;
    for (const TypeDecl* anc : model_ancestors(cls, model)) {
        if (declares_same(*anc, method)) return true;
    }
    // A supertype named in the service-entry list but not present in the model
    // cannot be inspected; treat its non-private instance methods as overrides.
    if (!method.is_private() && !method.is_static) {
        for (const auto& name : external_ancestor_names(cls, model)) {
            if (cfg.service_entry_types.matches_name(name)) return true;
        }
    }
    return false;
}

MockingScope identify_mocking_scope(const Callable& focal_method, const TypeDecl& focal_class,
                                    const AnalysisConfig& cfg, const CodeModel& model) {
    MockingScope out;
    std::vector<const Callable*> scope;
    std::set<const Callable*> in_scope;
    auto add = [&](const Callable* c) {
        if (c && in_scope.insert(c).second) scope.push_back(c);
    };

    add(&focal_method);
    for (const Callable* ctor : focal_class.constructors()) add(ctor);
    auto graph = model::build_class_call_graph(focal_class);
    for (const Callable* m : graph.reachable_from(&focal_method)) {
        if (m->kind == CallableKind::method) add(m);
    }
    if (is_service_entry_class(focal_class, cfg, model)) {
        for (const Callable* m : focal_class.methods()) {
            if (is_overridden(*m, cfg, model)) add(m);
        }
    }
    out.scope = scope;

    for (const Callable* member : scope) {
        for (const CallSite& cs : member->call_sites) {
            if (cs.is_constructor_call) {
                if (cs.receiver_type && cfg.mockable_apis.matches(*cs.receiver_type))
                    out.constructor_calls.push_back(&cs);
                continue;
            }
            if (cs.is_static_call) {
                if (cs.receiver_type && cfg.mockable_apis.matches(*cs.receiver_type))
                    out.static_calls.push_back(&cs);
                continue;
            }
            // Instance call on a receiver object of a mockable API type.
            if (cs.receiver_type && cfg.mockable_apis.matches(*cs.receiver_type))
                out.api_calls.push_back(&cs);
        }
    }
    return out;
}

MockPlan build_mock_plan(const FocalTarget& target, const AnalysisConfig& cfg,
                         const CodeModel& model) {
    MockPlan plan;
    plan.api_allowlist = cfg.mockable_apis;
    if (cfg.mockable_apis.empty() || !target.focal_method || !target.focal_class) return plan;
    auto ft = identify_mocked_fields_and_types(*target.focal_method, *target.focal_class,
                                               cfg.mockable_apis, model);
    plan.mockable_fields = std::move(ft.mockable_fields);
    plan.mockable_types = std::move(ft.mockable_types);
    auto scope = identify_mocking_scope(*target.focal_method, *target.focal_class, cfg, model);
    plan.constructor_calls = std::move(scope.constructor_calls);
    plan.static_calls = std::move(scope.static_calls);
    plan.api_calls = std::move(scope.api_calls);
    return plan;
}

TestSkeleton build_mock_skeleton(const MockPlan& plan, const FocalTarget& target) {
    if (plan.empty()) throw EmptyPlanError("mock plan has no mockable fields, types, or calls");

    TestSkeleton sk;
    sk.completion_marker = "/* COMPLETE: test inputs, calls, and assertions */";

    std::map<std::string, std::string> mock_var_by_type;  // base type name -> variable
    for (const FieldDecl* f : plan.mockable_fields) {
        sk.mock_declarations.push_back("@Mock private " + f->declared_type.name + " " + f->name +
                                       ";");
        mock_var_by_type.emplace(f->declared_type.base_name(), f->name);
    }
    for (const TypeRef& t : plan.mockable_types) {
        if (mock_var_by_type.count(t.base_name())) continue;
        std::string var = lower_first(t.base_name());
        auto dot = var.rfind('.');
        if (dot != std::string::npos) var = lower_first(var.substr(dot + 1));
        var += "Mock";
        sk.mock_declarations.push_back("@Mock private " + t.base_name() + " " + var + ";");
        mock_var_by_type.emplace(t.base_name(), var);
    }

    const TypeDecl* cls = target.focal_class;
    std::string cls_name = cls ? cls->simple_name() : "Focal";
    bool static_focal = target.focal_method && target.focal_method->is_static;

    std::string setup;
    setup += "    @BeforeEach\n";
    setup += "    void setUp() {\n";
    setup += "        MockitoAnnotations.openMocks(this);\n";
    if (!static_focal && cls) {
        std::string args;
        const Callable* ctor = nullptr;
        if (!cls->constructors().empty()) ctor = cls->constructors().front();
        if (ctor) {
            for (size_t i = 0; i < ctor->params.size(); ++i) {
                if (i) args += ", ";
                auto it = mock_var_by_type.find(ctor->params[i].type.base_name());
                args += it != mock_var_by_type.end() ? it->second
                                                     : default_value_for(ctor->params[i].type);
            }
        }
        setup += "        instance = new " + cls_name + "(" + args + ");\n";
    }
    setup += "    }\n";
    sk.setup_fixture = setup;

    auto stub_args = [](const CallSite& cs) {
        std::string args;
        for (int i = 0; i < cs.arg_count; ++i) {
            if (i) args += ", ";
            args += "any()";
        }
        return args;
    };

    std::vector<std::string> static_open;
    for (const CallSite* cs : plan.constructor_calls) {
        std::string type = cs->receiver_type ? cs->receiver_type->base_name() : cs->callee_name;
        auto dot = type.rfind('.');
        if (dot != std::string::npos) type = type.substr(dot + 1);
        std::string var = lower_first(type) + "Construction";
        TestSkeleton::StubSlot slot;
        slot.call_description = "new " + cs->callee_name + "(...)";
        slot.stub_text = "MockedConstruction<" + type + "> " + var + " = mockConstruction(" +
                         type + ".class)";
        sk.constructor_static_stubs.push_back(slot);
        static_open.push_back(slot.stub_text);
    }
    std::set<std::string> static_types_opened;
    std::vector<std::string> static_whens;
    for (const CallSite* cs : plan.static_calls) {
        std::string type = cs->receiver_type ? cs->receiver_type->base_name() : cs->receiver_name;
        auto dot = type.rfind('.');
        if (dot != std::string::npos) type = type.substr(dot + 1);
        std::string var = lower_first(type) + "Static";
        TestSkeleton::StubSlot slot;
        slot.call_description = type + "." + cs->callee_name + "(...)";
        if (static_types_opened.insert(type).second) {
            slot.stub_text =
                "MockedStatic<" + type + "> " + var + " = mockStatic(" + type + ".class)";
            static_open.push_back(slot.stub_text);
        }
        static_whens.push_back(var + ".when(() -> " + type + "." + cs->callee_name + "(" +
                               stub_args(*cs) + ")).thenReturn(null /* stub value */);");
        if (slot.stub_text.empty())
            slot.stub_text = var + ".when(() -> " + type + "." + cs->callee_name +
                             "(...)).thenReturn(...)";
        sk.constructor_static_stubs.push_back(slot);
    }
    std::vector<std::string> api_whens;
    for (const CallSite* cs : plan.api_calls) {
        std::string recv = cs->receiver_name;
        auto it = cs->receiver_type ? mock_var_by_type.find(cs->receiver_type->base_name())
                                    : mock_var_by_type.end();
        if (it != mock_var_by_type.end() &&
            std::none_of(plan.mockable_fields.begin(), plan.mockable_fields.end(),
                         [&](const FieldDecl* f) { return f->name == recv; }))
            recv = it->second;
        TestSkeleton::StubSlot slot;
        slot.call_description = cs->receiver_name + "." + cs->callee_name + "(...)";
        slot.stub_text = "when(" + recv + "." + cs->callee_name + "(" + stub_args(*cs) +
                         ")).thenReturn(null /* stub value */);";
        sk.api_stubs.push_back(slot);
        api_whens.push_back(slot.stub_text);
    }

    // Assemble the class.
    std::string text;
    text += "class " + cls_name + "Test {\n";
    for (const auto& d : sk.mock_declarations) text += "    " + d + "\n";
    if (!static_focal && cls) text += "    private " + cls_name + " instance;\n";
    text += "\n";
    text += sk.setup_fixture;
    text += "\n";
    text += "    @Test\n";
    std::string method_name =
        target.focal_method ? target.focal_method->name : "focal";
    text += "    void test" + method_name + "() {\n";
    if (!static_open.empty()) {
        text += "        try (";
        for (size_t i = 0; i < static_open.size(); ++i) {
            if (i) text += ";\n             ";
            text += static_open[i];
        }
        text += ") {\n";
        for (const auto& w : static_whens) text += "            " + w + "\n";
        for (const auto& w : api_whens) text += "            " + w + "\n";
        text += "            " + sk.completion_marker + "\n";
        text += "        }\n";
    } else {
        for (const auto& w : static_whens) text += "        " + w + "\n";
        for (const auto& w : api_whens) text += "        " + w + "\n";
        text += "        " + sk.completion_marker + "\n";
    }
    text += "    }\n";
    text += "}\n";
    sk.class_text = text;
    return sk;
}

}  // namespace testgen::analysis
