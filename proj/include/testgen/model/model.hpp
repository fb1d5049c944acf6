#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace testgen::model {

enum class Language { java, python };

enum class TypeKind { class_type, interface_type, abstract_class, enum_type };

enum class CallableKind { constructor, method, function };

enum class Visibility { public_vis, protected_vis, package_vis, private_vis, name_mangled };

// How a type name resolves against the analyzed project.
enum class TypeClass { application, library, primitive, unresolved };

// Half-open byte range into a CodeUnit's source text.
struct Span {
    size_t begin = 0;
    size_t end = 0;
    bool empty() const { return end <= begin; }
    size_t length() const { return empty() ? 0 : end - begin; }
};

struct TypeDecl;
struct Callable;
struct CodeUnit;
class CodeModel;

// A type name as written, generics erased. `resolved_name` carries the
// qualified form once imports/model lookup have run.
struct TypeRef {
    std::string name;
    std::string resolved_name;
    TypeClass classification = TypeClass::unresolved;

    bool is_array() const;
    std::string base_name() const;  // name without trailing []
    std::string display_name() const { return name; }
};

struct Param {
    std::string name;
    TypeRef type;
};

struct FieldDecl {
    std::string name;
    TypeRef declared_type;
    TypeDecl* owner = nullptr;
    Visibility visibility = Visibility::package_vis;
    bool is_static = false;
    Span span;
    int line = 0;
};

struct CallSite {
    std::string callee_name;
    // Lexical receiver chain with any leading "this." removed; empty for bare
    // calls. "<expr>" when the receiver is not a plain identifier chain.
    std::string receiver_name;
    std::optional<TypeRef> receiver_type;  // declared type of an instance receiver
    bool is_constructor_call = false;
    bool is_static_call = false;
    Callable* enclosing = nullptr;
    int arg_count = 0;
    Span span;
    int line = 0;
};

struct Callable {
    std::string name;
    TypeDecl* owner = nullptr;  // null for module-level functions
    CodeUnit* unit = nullptr;
    CallableKind kind = CallableKind::function;
    Visibility visibility = Visibility::public_vis;
    bool is_static = false;
    bool is_abstract = false;
    std::vector<Param> params;
    std::vector<Param> locals;  // best-effort declared locals, for receiver typing
    TypeRef return_type;
    std::vector<CallSite> call_sites;
    std::vector<std::string> annotations;  // Java annotations / Python decorators
    Span decl_span;
    Span body_span;  // empty for abstract/bodyless callables
    int line = 0;

    bool is_private() const {
        return visibility == Visibility::private_vis || visibility == Visibility::name_mangled;
    }
    std::string qualified_name() const;
    // Human-readable "Name(Type name, ...)" form used in prompts and reports.
    std::string signature() const;
};

struct TypeDecl {
    std::string qualified_name;  // nested classes as Outer$Inner
    TypeKind kind = TypeKind::class_type;
    Visibility visibility = Visibility::package_vis;
    std::optional<TypeRef> superclass;
    std::vector<TypeRef> interfaces;
    std::vector<std::unique_ptr<FieldDecl>> fields;
    std::vector<std::unique_ptr<Callable>> callables;
    CodeUnit* unit = nullptr;
    Span span;
    int line = 0;

    std::string simple_name() const;
    bool is_abstract() const {
        return kind == TypeKind::abstract_class || kind == TypeKind::interface_type;
    }
    std::vector<Callable*> methods() const;
    std::vector<Callable*> constructors() const;
    Callable* find_callable(std::string_view name, int arity) const;
};

struct Import {
    std::string qualified;  // "java.util.List", "shapes", "shapes.Circle"
    std::string alias;      // non-empty for "import x as y"
    bool wildcard = false;  // "import a.b.*" / "from x import *"

    std::string simple_name() const;
};

struct CodeUnit {
    std::string path;
    Language language = Language::java;
    std::string package_name;  // Java package / Python dotted module name
    std::vector<std::unique_ptr<TypeDecl>> types;
    std::vector<std::unique_ptr<Callable>> functions;  // top-level callables
    std::vector<Import> imports;
    std::string source_text;

    // Counts types plus all callables, nested members included.
    size_t declaration_count() const;
    std::vector<Callable*> all_callables() const;
};

struct Resolution {
    TypeClass classification = TypeClass::unresolved;
    TypeDecl* decl = nullptr;
};

// Fills owner/unit back-references; parsers call this so a standalone unit is
// self-consistent before any model-level resolution.
void attach_backrefs(CodeUnit& unit);

// Immutable once finalized; the index makes name -> declaration lookups
// deterministic (unit order, then declaration order).
class CodeModel {
public:
    CodeModel() = default;
    CodeModel(CodeModel&&) = default;
    CodeModel& operator=(CodeModel&&) = default;

    void add_unit(std::unique_ptr<CodeUnit> unit);
    // Builds the index and resolves every TypeRef and call-site receiver.
    void finalize();
    bool finalized() const { return finalized_; }

    const std::vector<std::unique_ptr<CodeUnit>>& units() const { return units_; }
    std::vector<TypeDecl*> all_types() const;

    TypeDecl* find_type(std::string_view name) const;  // qualified or simple
    CodeUnit* find_module(std::string_view dotted_name) const;

    Resolution resolve_type(const TypeRef& ref) const;
    // Classifies and fills resolved_name in place.
    void resolve_in_place(TypeRef& ref, const CodeUnit* context) const;

private:
    void resolve_unit(CodeUnit& unit);
    void resolve_callable(Callable& c, CodeUnit& unit);

    std::vector<std::unique_ptr<CodeUnit>> units_;
    std::map<std::string, TypeDecl*, std::less<>> by_qualified_;
    std::map<std::string, std::vector<TypeDecl*>, std::less<>> by_simple_;
    bool finalized_ = false;
};

// Intra-class static call graph: edge (m, n) iff m contains a call site that
// resolves to n within the same class. Unresolvable callees are dropped.
class ClassCallGraph {
public:
    const TypeDecl* type() const { return type_; }
    const std::vector<const Callable*>& successors(const Callable* from) const;
    bool has_edge(const Callable* from, const Callable* to) const;
    // Nodes reachable from `from` by one or more edges (excludes `from` unless
    // it sits on a cycle).
    std::vector<const Callable*> reachable_from(const Callable* from) const;
    size_t edge_count() const;

    friend ClassCallGraph build_class_call_graph(const TypeDecl& decl);

private:
    const TypeDecl* type_ = nullptr;
    std::map<const Callable*, std::vector<const Callable*>> edges_;
};

ClassCallGraph build_class_call_graph(const TypeDecl& decl);

// Resolves a call inside `decl` to one of its callables: exact name match,
// preferring matching arity, then declaration order.
Callable* resolve_intra_class_call(const TypeDecl& decl, const CallSite& cs);

const char* to_string(Language lang);
const char* to_string(Visibility v);
const char* to_string(CallableKind k);
const char* to_string(TypeClass c);

}  // namespace testgen::model
