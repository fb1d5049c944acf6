#include "testgen/model/model.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "testgen/util/text.hpp"

namespace testgen::model {

namespace {

const std::set<std::string>& java_primitives() {
    static const std::set<std::string> s = {"int",   "long", "short",   "byte", "char",
                                            "float", "double", "boolean", "void"};
    return s;
}

const std::set<std::string>& python_primitives() {
    static const std::set<std::string> s = {"int", "float", "bool", "str", "bytes", "None",
                                            "complex"};
    return s;
}

// Common java.lang / JDK names usable without an import.
const std::set<std::string>& java_lang_types() {
    static const std::set<std::string> s = {
        "String",        "Object",          "Integer",   "Long",      "Short",
        "Byte",          "Character",       "Float",     "Double",    "Boolean",
        "Number",        "Math",            "System",    "Thread",    "Runnable",
        "Exception",     "RuntimeException", "Error",    "Throwable", "StringBuilder",
        "StringBuffer",  "Iterable",        "Comparable", "Class",    "Void",
        "IllegalArgumentException", "IllegalStateException", "NullPointerException",
        "UnsupportedOperationException", "IndexOutOfBoundsException", "ArithmeticException",
        "NumberFormatException", "CharSequence", "Cloneable", "AutoCloseable"};
    return s;
}

const std::set<std::string>& python_builtins() {
    static const std::set<std::string> s = {
        "list", "dict", "set", "tuple", "frozenset", "object", "range",    "type",
        "Exception", "ValueError", "TypeError", "KeyError", "IndexError", "RuntimeError",
        "StopIteration", "ZeroDivisionError", "AttributeError", "NotImplementedError",
        "len",  "print", "repr", "super", "isinstance", "enumerate", "zip", "map", "filter",
        "sorted", "min", "max", "sum", "abs", "round", "open", "input", "hash", "id", "iter",
        "next", "getattr", "setattr", "hasattr", "vars", "callable", "format", "divmod"};
    return s;
}

bool looks_like_type_name(std::string_view name) {
    return !name.empty() && std::isupper(static_cast<unsigned char>(name[0]));
}

}  // namespace

bool TypeRef::is_array() const { return util::ends_with(name, "[]"); }

std::string TypeRef::base_name() const {
    std::string b = name;
    while (util::ends_with(b, "[]")) b = b.substr(0, b.size() - 2);
    return b;
}

std::string Import::simple_name() const {
    if (!alias.empty()) return alias;
    auto pos = qualified.rfind('.');
    return pos == std::string::npos ? qualified : qualified.substr(pos + 1);
}

std::string Callable::qualified_name() const {
    if (owner) return owner->qualified_name + "." + name;
    if (unit && !unit->package_name.empty()) return unit->package_name + "." + name;
    return name;
}

std::string Callable::signature() const {
    std::string out = name + "(";
    for (size_t i = 0; i < params.size(); ++i) {
        if (i) out += ", ";
        if (!params[i].type.name.empty()) {
            out += params[i].type.name;
            out += " ";
        }
        out += params[i].name;
    }
    out += ")";
    return out;
}

std::string TypeDecl::simple_name() const {
    auto pos = qualified_name.find_last_of(".$");
    return pos == std::string::npos ? qualified_name : qualified_name.substr(pos + 1);
}

std::vector<Callable*> TypeDecl::methods() const {
    std::vector<Callable*> out;
    for (const auto& c : callables)
        if (c->kind == CallableKind::method) out.push_back(c.get());
    return out;
}

std::vector<Callable*> TypeDecl::constructors() const {
    std::vector<Callable*> out;
    for (const auto& c : callables)
        if (c->kind == CallableKind::constructor) out.push_back(c.get());
    return out;
}

Callable* TypeDecl::find_callable(std::string_view name, int arity) const {
    Callable* name_match = nullptr;
    for (const auto& c : callables) {
        if (c->name != name) continue;
        if (static_cast<int>(c->params.size()) == arity) return c.get();
        if (!name_match) name_match = c.get();
    }
    return name_match;
}

size_t CodeUnit::declaration_count() const {
    size_t n = types.size() + functions.size();
    for (const auto& t : types) n += t->callables.size();
    return n;
}

std::vector<Callable*> CodeUnit::all_callables() const {
    std::vector<Callable*> out;
    for (const auto& f : functions) out.push_back(f.get());
    for (const auto& t : types)
        for (const auto& c : t->callables) out.push_back(c.get());
    return out;
}

void CodeModel::add_unit(std::unique_ptr<CodeUnit> unit) {
    finalized_ = false;
    units_.push_back(std::move(unit));
}

std::vector<TypeDecl*> CodeModel::all_types() const {
    std::vector<TypeDecl*> out;
    for (const auto& u : units_)
        for (const auto& t : u->types) out.push_back(t.get());
    return out;
}

TypeDecl* CodeModel::find_type(std::string_view name) const {
    auto q = by_qualified_.find(name);
    if (q != by_qualified_.end()) return q->second;
    auto s = by_simple_.find(name);
    if (s != by_simple_.end() && !s->second.empty()) return s->second.front();
    return nullptr;
}

CodeUnit* CodeModel::find_module(std::string_view dotted_name) const {
    for (const auto& u : units_) {
        if (u->language != Language::python) continue;
        if (u->package_name == dotted_name) return u.get();
        // Match by last component: "import shapes" finds pkg.shapes.
        auto pos = u->package_name.rfind('.');
        std::string_view last =
            pos == std::string::npos ? std::string_view(u->package_name)
                                     : std::string_view(u->package_name).substr(pos + 1);
        if (last == dotted_name) return u.get();
    }
    return nullptr;
}

void attach_backrefs(CodeUnit& unit) {
    for (const auto& t : unit.types) {
        t->unit = &unit;
        for (const auto& f : t->fields) f->owner = t.get();
        for (const auto& c : t->callables) {
            c->owner = t.get();
            c->unit = &unit;
        }
    }
    for (const auto& f : unit.functions) f->unit = &unit;
}

void CodeModel::finalize() {
    by_qualified_.clear();
    by_simple_.clear();
    for (const auto& u : units_) {
        attach_backrefs(*u);
        for (const auto& t : u->types) {
            by_qualified_.emplace(t->qualified_name, t.get());
            by_simple_[t->simple_name()].push_back(t.get());
        }
    }
    for (const auto& u : units_) resolve_unit(*u);
    finalized_ = true;
}

Resolution CodeModel::resolve_type(const TypeRef& ref) const {
    Resolution r;
    std::string base = ref.base_name();
    if (base.empty()) return r;
    if (TypeDecl* d = find_type(!ref.resolved_name.empty() ? std::string_view(ref.resolved_name)
                                                           : std::string_view(base))) {
        r.classification = ref.is_array() ? TypeClass::library : TypeClass::application;
        r.decl = ref.is_array() ? nullptr : d;
        return r;
    }
    r.classification = ref.classification == TypeClass::application ? TypeClass::unresolved
                                                                    : ref.classification;
    return r;
}

void CodeModel::resolve_in_place(TypeRef& ref, const CodeUnit* context) const {
    std::string base = ref.base_name();
    if (base.empty()) {
        ref.classification = TypeClass::unresolved;
        return;
    }
    bool array = ref.is_array();
    std::string array_suffix = array ? ref.name.substr(base.size()) : "";
    const auto& prims =
        (context && context->language == Language::python) ? python_primitives() : java_primitives();
    if (prims.count(base)) {
        ref.classification = array ? TypeClass::library : TypeClass::primitive;
        ref.resolved_name = base;
        return;
    }

    // In-model lookup: qualified name, same-package/unit simple name, then any
    // unique simple-name match.
    if (TypeDecl* d = find_type(base)) {
        bool same_scope = true;
        if (base.find('.') == std::string::npos && context) {
            // Prefer a declaration visible from the context unit when simple
            // names collide across packages.
            auto it = by_simple_.find(base);
            if (it != by_simple_.end() && it->second.size() > 1) {
                for (TypeDecl* cand : it->second) {
                    if (cand->unit == context ||
                        (cand->unit && cand->unit->package_name == context->package_name)) {
                        d = cand;
                        break;
                    }
                }
            }
            same_scope = true;
        }
        (void)same_scope;
        ref.resolved_name = d->qualified_name + array_suffix;
        ref.classification = array ? TypeClass::library : TypeClass::application;
        return;
    }

    // Import-based resolution to an external library name.
    if (context) {
        for (const auto& imp : context->imports) {
            if (imp.wildcard) continue;
            if (imp.simple_name() == base) {
                // The import might point at an in-model type by qualified name.
                if (TypeDecl* d = find_type(imp.qualified)) {
                    ref.resolved_name = d->qualified_name + array_suffix;
                    ref.classification = array ? TypeClass::library : TypeClass::application;
                } else {
                    ref.resolved_name = imp.qualified + array_suffix;
                    ref.classification = TypeClass::library;
                }
                return;
            }
        }
    }

    if (base.find('.') != std::string::npos) {
        ref.resolved_name = base + array_suffix;
        ref.classification = TypeClass::library;
        return;
    }
    bool python = context && context->language == Language::python;
    if (!python && java_lang_types().count(base)) {
        ref.resolved_name = "java.lang." + base + array_suffix;
        ref.classification = TypeClass::library;
        return;
    }
    if (python && python_builtins().count(base)) {
        ref.resolved_name = base;
        ref.classification = TypeClass::library;
        return;
    }
    ref.resolved_name = base + array_suffix;
    ref.classification = TypeClass::unresolved;
}

void CodeModel::resolve_unit(CodeUnit& unit) {
    for (const auto& t : unit.types) {
        if (t->superclass) resolve_in_place(*t->superclass, &unit);
        for (auto& iface : t->interfaces) resolve_in_place(iface, &unit);
        for (const auto& f : t->fields) resolve_in_place(f->declared_type, &unit);
        for (const auto& c : t->callables) resolve_callable(*c, unit);
    }
    for (const auto& f : unit.functions) resolve_callable(*f, unit);
}

void CodeModel::resolve_callable(Callable& c, CodeUnit& unit) {
    for (auto& p : c.params) resolve_in_place(p.type, &unit);
    if (!c.return_type.name.empty()) resolve_in_place(c.return_type, &unit);

    for (auto& cs : c.call_sites) {
        cs.enclosing = &c;
        if (cs.is_constructor_call) {
            TypeRef t{cs.callee_name, "", TypeClass::unresolved};
            resolve_in_place(t, &unit);
            cs.receiver_type.reset();
            cs.is_static_call = false;
            cs.receiver_type = t;  // constructed type recorded as the call's type
            continue;
        }
        if (unit.language == Language::python) {
            // Bare name resolving to an in-model class is a constructor call.
            if (cs.receiver_name.empty()) {
                if (TypeDecl* d = find_type(cs.callee_name)) {
                    cs.is_constructor_call = true;
                    TypeRef t{cs.callee_name, d->qualified_name, TypeClass::application};
                    cs.receiver_type = t;
                    continue;
                }
            } else if (cs.receiver_name != "<expr>") {
                // module.Class(...) constructor or Class.method(...) static call.
                auto pos = cs.receiver_name.rfind('.');
                std::string last = pos == std::string::npos ? cs.receiver_name
                                                            : cs.receiver_name.substr(pos + 1);
                if (TypeDecl* d = find_type(cs.receiver_name)) {
                    cs.is_static_call = true;
                    cs.receiver_type = TypeRef{cs.receiver_name, d->qualified_name,
                                               TypeClass::application};
                    continue;
                }
                if (find_type(cs.callee_name) &&
                    (find_module(cs.receiver_name) || find_module(last))) {
                    cs.is_constructor_call = true;
                    TypeDecl* d = find_type(cs.callee_name);
                    cs.receiver_type =
                        TypeRef{cs.callee_name, d->qualified_name, TypeClass::application};
                    continue;
                }
            }
            continue;
        }

        // Java receiver resolution: parameter, then field, then a type name.
        if (cs.receiver_name.empty() || cs.receiver_name == "<expr>" ||
            cs.receiver_name == "<super>")
            continue;
        std::string first = cs.receiver_name;
        auto dot = first.find('.');
        std::string rest;
        if (dot != std::string::npos) {
            rest = first.substr(dot + 1);
            first = first.substr(0, dot);
        }

        const TypeRef* declared = nullptr;
        for (const auto& p : c.params)
            if (p.name == first) declared = &p.type;
        if (!declared) {
            for (const auto& l : c.locals)
                if (l.name == first) declared = &l.type;
        }
        if (!declared && c.owner) {
            for (const auto& f : c.owner->fields)
                if (f->name == first) declared = &f->declared_type;
        }
        if (declared) {
            TypeRef t = *declared;
            if (!rest.empty()) {
                // One level of field access through an application type.
                Resolution res = resolve_type(t);
                const TypeRef* inner = nullptr;
                if (res.decl && rest.find('.') == std::string::npos) {
                    for (const auto& f : res.decl->fields)
                        if (f->name == rest) inner = &f->declared_type;
                }
                if (!inner) continue;
                t = *inner;
            }
            cs.receiver_type = t;
            continue;
        }

        // Type-name receiver => static call.
        if (TypeDecl* d = find_type(cs.receiver_name)) {
            cs.is_static_call = true;
            cs.receiver_type =
                TypeRef{cs.receiver_name, d->qualified_name, TypeClass::application};
            continue;
        }
        TypeRef as_type{cs.receiver_name, "", TypeClass::unresolved};
        resolve_in_place(as_type, &unit);
        if (as_type.classification == TypeClass::library ||
            (rest.empty() && looks_like_type_name(first))) {
            cs.is_static_call = true;
            cs.receiver_type = as_type;
        }
    }
}

const std::vector<const Callable*>& ClassCallGraph::successors(const Callable* from) const {
    static const std::vector<const Callable*> empty;
    auto it = edges_.find(from);
    return it == edges_.end() ? empty : it->second;
}

bool ClassCallGraph::has_edge(const Callable* from, const Callable* to) const {
    const auto& succ = successors(from);
    return std::find(succ.begin(), succ.end(), to) != succ.end();
}

std::vector<const Callable*> ClassCallGraph::reachable_from(const Callable* from) const {
    std::vector<const Callable*> order;
    std::set<const Callable*> seen;
    std::vector<const Callable*> stack{from};
    while (!stack.empty()) {
        const Callable* cur = stack.back();
        stack.pop_back();
        for (const Callable* next : successors(cur)) {
            if (seen.insert(next).second) {
                order.push_back(next);
                stack.push_back(next);
            }
        }
    }
    return order;
}

size_t ClassCallGraph::edge_count() const {
    size_t n = 0;
    for (const auto& [from, to] : edges_) n += to.size();
    return n;
}

Callable* resolve_intra_class_call(const TypeDecl& decl, const CallSite& cs) {
    // Only bare calls, this-calls, and calls whose receiver is typed as the
    // class itself stay inside the class.
    if (!cs.receiver_name.empty() && cs.receiver_name != "<expr>") {
        if (!cs.receiver_type) return nullptr;
        std::string base = cs.receiver_type->base_name();
        if (base != decl.simple_name() && cs.receiver_type->resolved_name != decl.qualified_name)
            return nullptr;
    }
    if (cs.receiver_name == "<expr>" || cs.receiver_name == "<super>") return nullptr;
    if (cs.is_constructor_call) {
        std::string written = cs.callee_name;
        auto pos = written.rfind('.');
        if (pos != std::string::npos) written = written.substr(pos + 1);
        if (written != decl.simple_name()) return nullptr;
        Callable* best = nullptr;
        for (const auto& c : decl.callables) {
            if (c->kind != CallableKind::constructor) continue;
            if (static_cast<int>(c->params.size()) == cs.arg_count) return c.get();
            if (!best) best = c.get();
        }
        return best;
    }
    Callable* best = nullptr;
    for (const auto& c : decl.callables) {
        if (c->kind == CallableKind::constructor) continue;
        if (c->name != cs.callee_name) continue;
        if (static_cast<int>(c->params.size()) == cs.arg_count) return c.get();
        if (!best) best = c.get();
    }
    return best;
}

ClassCallGraph build_class_call_graph(const TypeDecl& decl) {
    ClassCallGraph g;
    g.type_ = &decl;
    for (const auto& c : decl.callables) {
        std::vector<const Callable*> succ;
        for (const auto& cs : c->call_sites) {
            Callable* target = resolve_intra_class_call(decl, cs);
            if (target && target != c.get()) {
                if (std::find(succ.begin(), succ.end(), target) == succ.end())
                    succ.push_back(target);
            } else if (target == c.get()) {
                succ.push_back(target);  // self-recursion keeps the edge
            }
        }
        if (!succ.empty()) g.edges_[c.get()] = std::move(succ);
    }
    return g;
}

const char* to_string(Language lang) {
    return lang == Language::java ? "java" : "python";
}

const char* to_string(Visibility v) {
    switch (v) {
        case Visibility::public_vis: return "public";
        case Visibility::protected_vis: return "protected";
        case Visibility::package_vis: return "package";
        case Visibility::private_vis: return "private";
        case Visibility::name_mangled: return "name_mangled";
    }
    return "unknown";
}

const char* to_string(CallableKind k) {
    switch (k) {
        case CallableKind::constructor: return "constructor";
        case CallableKind::method: return "method";
        case CallableKind::function: return "function";
    }
    return "unknown";
}

const char* to_string(TypeClass c) {
    switch (c) {
        case TypeClass::application: return "application";
        case TypeClass::library: return "library";
        case TypeClass::primitive: return "primitive";
        case TypeClass::unresolved: return "unresolved";
    }
    return "unknown";
}

}  // namespace testgen::model
