#include <cctype>
#include <set>

#include "testgen/error.hpp"
#include "testgen/model/parser.hpp"
#include "testgen/util/text.hpp"

namespace testgen::model {

namespace {

enum class TokKind { ident, punct, string_lit, number, end };

struct Token {
    TokKind kind = TokKind::end;
    std::string text;
    size_t offset = 0;
};

const std::set<std::string>& java_keywords() {
    static const std::set<std::string> s = {
        "abstract", "assert",   "boolean",    "break",    "byte",      "case",    "catch",
        "char",     "class",    "const",      "continue", "default",   "do",      "double",
        "else",     "enum",     "extends",    "final",    "finally",   "float",   "for",
        "goto",     "if",       "implements", "import",   "instanceof", "int",    "interface",
        "long",     "native",   "new",        "package",  "private",   "protected", "public",
        "return",   "short",    "static",     "strictfp", "super",     "switch",  "synchronized",
        "this",     "throw",    "throws",     "transient", "try",      "void",    "volatile",
        "while",    "var",      "record",     "sealed",   "permits",   "yield"};
    return s;
}

bool is_modifier(const std::string& t) {
    static const std::set<std::string> mods = {"public",   "protected", "private",  "static",
                                               "abstract", "final",     "strictfp", "native",
                                               "synchronized", "transient", "volatile", "default",
                                               "sealed"};
    return mods.count(t) > 0;
}

std::vector<Token> lex_java(std::string_view src) {
    std::vector<Token> out;
    size_t i = 0;
    size_t n = src.size();
    while (i < n) {
        char c = src[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        if (c == '/' && i + 1 < n && src[i + 1] == '/') {
            while (i < n && src[i] != '\n') ++i;
            continue;
        }
        if (c == '/' && i + 1 < n && src[i + 1] == '*') {
            i += 2;
            while (i + 1 < n && !(src[i] == '*' && src[i + 1] == '/')) ++i;
            i = (i + 1 < n) ? i + 2 : n;
            continue;
        }
        if (c == '"') {
            size_t start = i;
            if (i + 2 < n && src[i + 1] == '"' && src[i + 2] == '"') {
                i += 3;  // text block
                while (i + 2 < n && !(src[i] == '"' && src[i + 1] == '"' && src[i + 2] == '"')) ++i;
                i = (i + 2 < n) ? i + 3 : n;
            } else {
                ++i;
                while (i < n && src[i] != '"') {
                    if (src[i] == '\\' && i + 1 < n) ++i;
                    ++i;
                }
                if (i < n) ++i;
            }
            out.push_back({TokKind::string_lit, std::string(src.substr(start, i - start)), start});
            continue;
        }
        if (c == '\'') {
            size_t start = i;
            ++i;
            while (i < n && src[i] != '\'') {
                if (src[i] == '\\' && i + 1 < n) ++i;
                ++i;
            }
            if (i < n) ++i;
            out.push_back({TokKind::string_lit, std::string(src.substr(start, i - start)), start});
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$') {
            size_t start = i;
            while (i < n && (std::isalnum(static_cast<unsigned char>(src[i])) || src[i] == '_' ||
                             src[i] == '$'))
                ++i;
            out.push_back({TokKind::ident, std::string(src.substr(start, i - start)), start});
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t start = i;
            while (i < n && (std::isalnum(static_cast<unsigned char>(src[i])) || src[i] == '.' ||
                             src[i] == '_'))
                ++i;
            out.push_back({TokKind::number, std::string(src.substr(start, i - start)), start});
            continue;
        }
        out.push_back({TokKind::punct, std::string(1, c), i});
        ++i;
    }
    out.push_back({TokKind::end, "", n});
    return out;
}

// Token-level scanner shared by the full parser and scan_calls().
struct BodyScan {
    std::vector<RawCall> calls;
    std::vector<Param> locals;
};

size_t skip_generics(const std::vector<Token>& toks, size_t i) {
    // toks[i] must be '<'; returns index past the matching '>'.
    int depth = 0;
    size_t n = toks.size();
    while (i < n) {
        if (toks[i].kind == TokKind::punct) {
            if (toks[i].text == "<") ++depth;
            else if (toks[i].text == ">") {
                --depth;
                if (depth == 0) return i + 1;
            } else if (depth > 0 && toks[i].text != "," && toks[i].text != "?" &&
                       toks[i].text != "." && toks[i].text != "[" && toks[i].text != "]" &&
                       toks[i].text != "&") {
                return i;  // not a generic argument list after all
            }
        } else if (toks[i].kind != TokKind::ident && toks[i].kind != TokKind::number) {
            return i;
        }
        ++i;
    }
    return i;
}

int count_args(const std::vector<Token>& toks, size_t open_paren) {
    int depth = 0;
    int commas = 0;
    bool any = false;
    for (size_t i = open_paren; i < toks.size(); ++i) {
        const auto& t = toks[i];
        if (t.kind != TokKind::punct) {
            if (depth == 1) any = true;
            continue;
        }
        if (t.text == "(" || t.text == "[" || t.text == "{") ++depth;
        else if (t.text == ")" || t.text == "]" || t.text == "}") {
            --depth;
            if (depth == 0) break;
        } else if (t.text == "," && depth == 1)
            ++commas;
        else if (depth == 1)
            any = true;
    }
    if (!any && commas == 0) return 0;
    return commas + 1;
}

bool plausible_local_type(const std::string& name) {
    static const std::set<std::string> prims = {"int",   "long",  "short",   "byte", "char",
                                                "float", "double", "boolean", "var"};
    if (prims.count(name)) return true;
    return !name.empty() && std::isupper(static_cast<unsigned char>(name[0]));
}

BodyScan scan_java_body(const std::vector<Token>& toks) {
    BodyScan out;
    size_t n = toks.size();
    for (size_t i = 0; i < n; ++i) {
        const Token& t = toks[i];
        if (t.kind != TokKind::ident) continue;

        if (t.text == "new") {
            // new Qualified.Name(...) — array creation (bracket) is skipped.
            size_t j = i + 1;
            std::string type_name;
            while (j < n && toks[j].kind == TokKind::ident) {
                if (!type_name.empty()) type_name += ".";
                type_name += toks[j].text;
                ++j;
                if (j < n && toks[j].kind == TokKind::punct && toks[j].text == "<")
                    j = skip_generics(toks, j);
                if (j < n && toks[j].kind == TokKind::punct && toks[j].text == "." &&
                    j + 1 < n && toks[j + 1].kind == TokKind::ident)
                    ++j;
                else
                    break;
            }
            if (!type_name.empty() && j < n && toks[j].kind == TokKind::punct &&
                toks[j].text == "(") {
                RawCall rc;
                rc.callee_name = type_name;
                rc.is_constructor = true;
                rc.arg_count = count_args(toks, j);
                rc.offset = t.offset;
                out.calls.push_back(rc);
            }
            i = j > i ? j - 1 : i;
            continue;
        }
        if (java_keywords().count(t.text)) continue;

        // Identifier chain: a.b.c( — receiver is everything before the last name.
        bool prev_is_dot = i > 0 && toks[i - 1].kind == TokKind::punct && toks[i - 1].text == ".";
        if (prev_is_dot) {
            // Mid-chain names were consumed with the chain; a call hanging off an
            // expression (foo().bar(), "s".length()) starts fresh here.
            bool expr_before = i >= 2 && (toks[i - 2].kind == TokKind::string_lit ||
                                          (toks[i - 2].kind == TokKind::punct &&
                                           (toks[i - 2].text == ")" || toks[i - 2].text == "]")));
            if (expr_before && i + 1 < n && toks[i + 1].kind == TokKind::punct &&
                toks[i + 1].text == "(") {
                RawCall rc;
                rc.callee_name = t.text;
                rc.receiver_name = "<expr>";
                rc.arg_count = count_args(toks, i + 1);
                rc.offset = t.offset;
                out.calls.push_back(rc);
            }
            continue;
        }

        std::vector<std::string> chain{t.text};
        size_t j = i + 1;
        size_t last_name_idx = i;
        while (j + 1 < n && toks[j].kind == TokKind::punct && toks[j].text == ".") {
            size_t k = j + 1;
            if (toks[k].kind == TokKind::punct && toks[k].text == "<") {
                k = skip_generics(toks, k);  // explicit generic method call
            }
            if (k < n && toks[k].kind == TokKind::ident) {
                chain.push_back(toks[k].text);
                last_name_idx = k;
                j = k + 1;
            } else {
                break;
            }
        }
        if (j < n && toks[j].kind == TokKind::punct && toks[j].text == "(") {
            std::string callee = chain.back();
            if (!java_keywords().count(callee)) {
                chain.pop_back();
                std::string receiver;
                // An expression receiver (e.g. foo().bar()) is opaque.
                bool expr_receiver = i > 0 && toks[i - 1].kind == TokKind::punct &&
                                     (toks[i - 1].text == ")" || toks[i - 1].text == "]");
                if (!chain.empty() && chain.front() == "this") chain.erase(chain.begin());
                if (!chain.empty() && chain.front() == "super") {
                    receiver = "<super>";
                } else {
                    for (const auto& part : chain) {
                        if (!receiver.empty()) receiver += ".";
                        receiver += part;
                    }
                }
                if (expr_receiver) receiver = "<expr>";
                RawCall rc;
                rc.callee_name = callee;
                rc.receiver_name = receiver;
                rc.arg_count = count_args(toks, j);
                rc.offset = toks[last_name_idx].offset;
                out.calls.push_back(rc);
            }
        } else if (j < n && chain.size() >= 1 &&
                   (toks[j].kind == TokKind::ident ||
                    (toks[j].kind == TokKind::punct && toks[j].text == "[" && j + 1 < n &&
                     toks[j + 1].kind == TokKind::punct && toks[j + 1].text == "]"))) {
            // Possible local declaration: Type name, Type[] name, Type name[].
            std::string type_name;
            for (const auto& part : chain) {
                if (!type_name.empty()) type_name += ".";
                type_name += part;
            }
            size_t k = j;
            std::string pre_suffix;
            while (k + 1 < n && toks[k].kind == TokKind::punct && toks[k].text == "[" &&
                   toks[k + 1].kind == TokKind::punct && toks[k + 1].text == "]") {
                pre_suffix += "[]";
                k += 2;
            }
            if (k < n && toks[k].kind == TokKind::ident) {
                std::string var_name = toks[k].text;
                size_t after = k + 1;
                std::string suffix = pre_suffix;
                while (after + 1 < n && toks[after].kind == TokKind::punct &&
                       toks[after].text == "[" && toks[after + 1].text == "]") {
                    suffix += "[]";
                    after += 2;
                }
                if (after < n && toks[after].kind == TokKind::punct &&
                    (toks[after].text == "=" || toks[after].text == ";" ||
                     toks[after].text == ":") &&
                    plausible_local_type(chain.front()) && !java_keywords().count(var_name)) {
                    out.locals.push_back(
                        {var_name, TypeRef{type_name + suffix, "", TypeClass::unresolved}});
                }
            }
        } else if (j + 1 < n && toks[j].kind == TokKind::punct && toks[j].text == "<" &&
                   plausible_local_type(chain.front())) {
            // Generic local: List<String> names = ...
            size_t after_gen = skip_generics(toks, j);
            std::string suffix;
            while (after_gen + 1 < n && toks[after_gen].kind == TokKind::punct &&
                   toks[after_gen].text == "[" && toks[after_gen + 1].text == "]") {
                suffix += "[]";
                after_gen += 2;
            }
            if (after_gen + 1 < n && toks[after_gen].kind == TokKind::ident &&
                toks[after_gen + 1].kind == TokKind::punct &&
                (toks[after_gen + 1].text == "=" || toks[after_gen + 1].text == ";" ||
                 toks[after_gen + 1].text == ":")) {
                std::string type_name;
                for (const auto& part : chain) {
                    if (!type_name.empty()) type_name += ".";
                    type_name += part;
                }
                out.locals.push_back(
                    {toks[after_gen].text, TypeRef{type_name + suffix, "", TypeClass::unresolved}});
            }
        }
    }
    return out;
}

class JavaParser {
public:
    JavaParser(const std::string& src, const std::string& path)
        : src_(src), path_(path), lines_(src), toks_(lex_java(src)) {}

    std::unique_ptr<CodeUnit> parse() {
        auto unit = std::make_unique<CodeUnit>();
        unit->language = Language::java;
        unit->path = path_;
        unit->source_text = src_;

        while (!at_end()) {
            if (eat_punct(";")) continue;
            std::vector<std::string> annotations = parse_annotations();
            if (at_ident("package")) {
                ++pos_;
                unit->package_name = parse_qualified_name();
                expect_punct(";");
                continue;
            }
            if (at_ident("import")) {
                ++pos_;
                Import imp;
                if (at_ident("static")) ++pos_;
                imp.qualified = parse_qualified_name();
                if (eat_punct(".")) {
                    expect_punct("*");
                    imp.wildcard = true;
                }
                expect_punct(";");
                unit->imports.push_back(imp);
                continue;
            }
            std::vector<std::string> mods = parse_modifiers();
            if (at_ident("class") || at_ident("interface") || at_ident("enum")) {
                parse_type_decl(*unit, unit->package_name, mods, annotations);
                continue;
            }
            error("expected type declaration");
        }
        attach_backrefs(*unit);
        return unit;
    }

private:
    bool at_end() const { return toks_[pos_].kind == TokKind::end; }
    const Token& cur() const { return toks_[pos_]; }
    const Token& peek(size_t k = 1) const {
        size_t i = pos_ + k;
        return i < toks_.size() ? toks_[i] : toks_.back();
    }
    bool at_ident(std::string_view t) const {
        return cur().kind == TokKind::ident && cur().text == t;
    }
    bool at_punct(std::string_view t) const {
        return cur().kind == TokKind::punct && cur().text == t;
    }
    bool eat_punct(std::string_view t) {
        if (at_punct(t)) {
            ++pos_;
            return true;
        }
        return false;
    }
    void expect_punct(std::string_view t) {
        if (!eat_punct(t)) error(std::string("expected '") + std::string(t) + "'");
    }
    [[noreturn]] void error(const std::string& msg) const {
        size_t off = cur().offset;
        throw SyntaxError(msg, lines_.line_of(off), lines_.column_of(off));
    }

    std::vector<std::string> parse_annotations() {
        std::vector<std::string> names;
        while (at_punct("@")) {
            ++pos_;
            if (cur().kind != TokKind::ident) error("expected annotation name");
            std::string name = parse_qualified_name();
            if (at_punct("(")) skip_balanced("(", ")");
            if (name == "interface") error("annotation declarations are not supported");
            names.push_back(name);
        }
        return names;
    }

    std::vector<std::string> parse_modifiers(std::vector<std::string>* annotations = nullptr) {
        std::vector<std::string> mods;
        while (cur().kind == TokKind::ident && is_modifier(cur().text)) {
            mods.push_back(cur().text);
            ++pos_;
            // annotations sandwiched between modifiers
            while (at_punct("@")) {
                ++pos_;
                std::string name = parse_qualified_name();
                if (at_punct("(")) skip_balanced("(", ")");
                if (annotations) annotations->push_back(name);
            }
        }
        return mods;
    }

    std::string parse_qualified_name() {
        if (cur().kind != TokKind::ident) error("expected identifier");
        std::string name = cur().text;
        ++pos_;
        while (at_punct(".") && peek().kind == TokKind::ident) {
            // Stop before ".*" (handled by import parsing).
            if (peek().text.empty()) break;
            ++pos_;
            name += "." + cur().text;
            ++pos_;
        }
        return name;
    }

    TypeRef parse_type_ref() {
        std::string name = parse_qualified_name();
        if (at_punct("<")) pos_ = skip_generics(toks_, pos_);
        while (at_punct("[") && peek().kind == TokKind::punct && peek().text == "]") {
            name += "[]";
            pos_ += 2;
        }
        return TypeRef{name, "", TypeClass::unresolved};
    }

    void skip_balanced(std::string_view open, std::string_view close) {
        if (!at_punct(open)) error(std::string("expected '") + std::string(open) + "'");
        int depth = 0;
        while (!at_end()) {
            if (at_punct(open)) ++depth;
            else if (at_punct(close)) {
                --depth;
                if (depth == 0) {
                    ++pos_;
                    return;
                }
            }
            ++pos_;
        }
        error(std::string("unbalanced '") + std::string(open) + "'");
    }

    size_t find_matching_brace(size_t open_idx) const {
        int depth = 0;
        for (size_t i = open_idx; i < toks_.size(); ++i) {
            if (toks_[i].kind != TokKind::punct) continue;
            if (toks_[i].text == "{") ++depth;
            else if (toks_[i].text == "}") {
                --depth;
                if (depth == 0) return i;
            }
        }
        size_t off = toks_[open_idx].offset;
        throw SyntaxError("unbalanced '{'", lines_.line_of(off), lines_.column_of(off));
    }

    void parse_type_decl(CodeUnit& unit, const std::string& qualifier,
                         const std::vector<std::string>& mods,
                         const std::vector<std::string>& annotations, TypeDecl* outer = nullptr) {
        (void)annotations;
        TypeKind kind = TypeKind::class_type;
        bool is_abstract_mod =
            std::find(mods.begin(), mods.end(), "abstract") != mods.end();
        if (at_ident("interface")) kind = TypeKind::interface_type;
        else if (at_ident("enum")) kind = TypeKind::enum_type;
        else if (is_abstract_mod) kind = TypeKind::abstract_class;
        size_t decl_start = cur().offset;
        ++pos_;  // class/interface/enum

        if (cur().kind != TokKind::ident) error("expected type name");
        std::string simple = cur().text;
        ++pos_;
        if (at_punct("<")) pos_ = skip_generics(toks_, pos_);

        auto decl = std::make_unique<TypeDecl>();
        decl->kind = kind;
        decl->visibility = visibility_from(mods);
        decl->qualified_name = outer ? outer->qualified_name + "$" + simple
                             : qualifier.empty() ? simple : qualifier + "." + simple;
        decl->line = lines_.line_of(decl_start);

        while (at_ident("extends") || at_ident("implements") || at_ident("permits")) {
            bool is_extends = at_ident("extends");
            bool is_permits = at_ident("permits");
            ++pos_;
            do {
                TypeRef t = parse_type_ref();
                if (is_permits) continue;
                if (is_extends && kind != TypeKind::interface_type && !decl->superclass)
                    decl->superclass = t;
                else
                    decl->interfaces.push_back(t);
            } while (eat_punct(","));
        }

        if (!at_punct("{")) error("expected '{' in type declaration");
        size_t body_open = pos_;
        size_t body_close = find_matching_brace(body_open);
        decl->span = Span{decl_start, toks_[body_close].offset + 1};
        ++pos_;  // consume '{'

        if (kind == TypeKind::enum_type) parse_enum_constants();

        TypeDecl* raw = decl.get();
        while (pos_ < body_close) {
            if (eat_punct(";")) continue;
            parse_member(unit, *raw);
        }
        pos_ = body_close + 1;

        // Anonymous and local classes are not modeled; nested named classes were
        // appended to the unit during member parsing.
        unit.types.push_back(std::move(decl));
    }

    void parse_enum_constants() {
        // Constants run until ';' or the class body end.
        while (!at_end()) {
            if (at_punct(";")) {
                ++pos_;
                return;
            }
            if (at_punct("}")) return;
            if (cur().kind == TokKind::ident) ++pos_;
            else if (at_punct("@")) {
                ++pos_;
                parse_qualified_name();
                if (at_punct("(")) skip_balanced("(", ")");
                continue;
            } else
                error("expected enum constant");
            if (at_punct("(")) skip_balanced("(", ")");
            if (at_punct("{")) skip_balanced("{", "}");
            if (!eat_punct(",")) {
                if (at_punct(";")) {
                    ++pos_;
                    return;
                }
                return;  // '}' ends the constant list
            }
        }
    }

    static Visibility visibility_from(const std::vector<std::string>& mods) {
        for (const auto& m : mods) {
            if (m == "public") return Visibility::public_vis;
            if (m == "protected") return Visibility::protected_vis;
            if (m == "private") return Visibility::private_vis;
        }
        return Visibility::package_vis;
    }

    void parse_member(CodeUnit& unit, TypeDecl& owner) {
        std::vector<std::string> annotations = parse_annotations();
        size_t member_start = cur().offset;
        std::vector<std::string> mods = parse_modifiers(&annotations);
        while (at_punct("@")) {  // annotations after modifiers
            auto more = parse_annotations();
            annotations.insert(annotations.end(), more.begin(), more.end());
            auto more_mods = parse_modifiers(&annotations);
            mods.insert(mods.end(), more_mods.begin(), more_mods.end());
        }

        if (at_ident("class") || at_ident("interface") || at_ident("enum")) {
            parse_type_decl(unit, "", mods, annotations, &owner);
            return;
        }
        if (at_punct("{")) {  // static/instance initializer
            skip_balanced("{", "}");
            return;
        }

        bool in_interface = owner.kind == TypeKind::interface_type;
        bool has_static = std::find(mods.begin(), mods.end(), "static") != mods.end();
        bool has_abstract = std::find(mods.begin(), mods.end(), "abstract") != mods.end();
        bool has_default = std::find(mods.begin(), mods.end(), "default") != mods.end();

        // Constructor: simple name followed by '('.
        if (cur().kind == TokKind::ident && cur().text == owner.simple_name() &&
            peek().kind == TokKind::punct && peek().text == "(") {
            auto c = std::make_unique<Callable>();
            c->name = owner.simple_name();
            c->kind = CallableKind::constructor;
            c->visibility = visibility_from(mods);
            c->annotations = annotations;
            c->line = lines_.line_of(cur().offset);
            ++pos_;
            parse_params(*c);
            skip_throws();
            finish_body(*c, member_start);
            owner.callables.push_back(std::move(c));
            return;
        }

        // Generic method type parameters.
        if (at_punct("<")) pos_ = skip_generics(toks_, pos_);

        TypeRef type = parse_type_ref();
        if (cur().kind != TokKind::ident) error("expected member name");
        std::string name = cur().text;
        size_t name_off = cur().offset;
        ++pos_;

        if (at_punct("(")) {
            auto c = std::make_unique<Callable>();
            c->name = name;
            c->kind = CallableKind::method;
            c->return_type = type;
            c->visibility = in_interface && visibility_from(mods) == Visibility::package_vis
                                ? Visibility::public_vis
                                : visibility_from(mods);
            c->is_static = has_static;
            c->annotations = annotations;
            c->line = lines_.line_of(name_off);
            parse_params(*c);
            skip_throws();
            if (at_punct(";")) {
                ++pos_;
                c->is_abstract = true;
                c->decl_span = Span{member_start, toks_[pos_ - 1].offset + 1};
            } else {
                finish_body(*c, member_start);
            }
            if (in_interface && c->body_span.empty() && !has_default && !has_static)
                c->is_abstract = true;
            if (has_abstract && c->body_span.empty()) c->is_abstract = true;
            owner.callables.push_back(std::move(c));
            return;
        }

        // Field declaration, possibly with several declarators.
        while (true) {
            auto f = std::make_unique<FieldDecl>();
            f->name = name;
            f->declared_type = type;
            f->visibility = visibility_from(mods);
            f->is_static = has_static;
            f->line = lines_.line_of(name_off);
            while (at_punct("[") && peek().kind == TokKind::punct && peek().text == "]") {
                f->declared_type.name += "[]";
                pos_ += 2;
            }
            f->span = Span{member_start, cur().offset};
            owner.fields.push_back(std::move(f));
            if (eat_punct("=")) skip_initializer();
            if (eat_punct(",")) {
                if (cur().kind != TokKind::ident) error("expected field name");
                name = cur().text;
                name_off = cur().offset;
                ++pos_;
                continue;
            }
            expect_punct(";");
            break;
        }
    }

    void parse_params(Callable& c) {
        expect_punct("(");
        if (eat_punct(")")) return;
        while (true) {
            while (at_punct("@")) {
                ++pos_;
                parse_qualified_name();
                if (at_punct("(")) skip_balanced("(", ")");
            }
            if (at_ident("final")) ++pos_;
            TypeRef type = parse_type_ref();
            // varargs
            if (at_punct(".") && peek().kind == TokKind::punct && peek().text == "." &&
                peek(2).kind == TokKind::punct && peek(2).text == ".") {
                pos_ += 3;
                type.name += "[]";
            }
            if (cur().kind != TokKind::ident) error("expected parameter name");
            std::string pname = cur().text;
            ++pos_;
            while (at_punct("[") && peek().kind == TokKind::punct && peek().text == "]") {
                type.name += "[]";
                pos_ += 2;
            }
            c.params.push_back({pname, type});
            if (eat_punct(",")) continue;
            expect_punct(")");
            break;
        }
    }

    void skip_throws() {
        if (!at_ident("throws")) return;
        ++pos_;
        do {
            parse_type_ref();
        } while (eat_punct(","));
    }

    void skip_initializer() {
        // Until ',' or ';' at depth 0.
        int depth = 0;
        while (!at_end()) {
            if (cur().kind == TokKind::punct) {
                const std::string& t = cur().text;
                if (t == "(" || t == "[" || t == "{") ++depth;
                else if (t == ")" || t == "]" || t == "}") --depth;
                else if (depth == 0 && (t == "," || t == ";"))
                    return;
            }
            ++pos_;
        }
        error("unterminated field initializer");
    }

    void finish_body(Callable& c, size_t decl_start) {
        if (!at_punct("{")) error("expected method body");
        size_t open = pos_;
        size_t close = find_matching_brace(open);
        c.body_span = Span{toks_[open].offset + 1, toks_[close].offset};
        c.decl_span = Span{decl_start, toks_[close].offset + 1};
        pos_ = close + 1;

        std::string_view body =
            std::string_view(src_).substr(c.body_span.begin, c.body_span.length());
        auto scan = scan_java_body(lex_java(body));
        for (auto& rc : scan.calls) {
            CallSite cs;
            cs.callee_name = rc.callee_name;
            cs.receiver_name = rc.receiver_name;
            cs.is_constructor_call = rc.is_constructor;
            cs.arg_count = rc.arg_count;
            cs.span = Span{c.body_span.begin + rc.offset,
                           c.body_span.begin + rc.offset + rc.callee_name.size()};
            cs.line = lines_.line_of(cs.span.begin);
            c.call_sites.push_back(std::move(cs));
        }
        c.locals = std::move(scan.locals);
    }

    const std::string& src_;
    std::string path_;
    util::LineIndex lines_;
    std::vector<Token> toks_;
    size_t pos_ = 0;
};

}  // namespace

std::unique_ptr<CodeUnit> parse_java_unit(const std::string& source_text,
                                          const std::string& path) {
    JavaParser p(source_text, path);
    return p.parse();
}

std::vector<RawCall> scan_java_calls(std::string_view body) {
    auto scan = scan_java_body(lex_java(body));
    return scan.calls;
}

}  // namespace testgen::model
