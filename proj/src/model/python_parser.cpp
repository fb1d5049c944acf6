#include <cctype>
#include <set>

#include "testgen/error.hpp"
#include "testgen/model/parser.hpp"
#include "testgen/util/text.hpp"

namespace testgen::model {

namespace {

const std::set<std::string>& python_keywords() {
    static const std::set<std::string> s = {
        "False", "None",  "True",    "and",   "as",     "assert", "async", "await",
        "break", "class", "continue", "def",  "del",    "elif",   "else",  "except",
        "finally", "for", "from",    "global", "if",    "import", "in",    "is",
        "lambda",  "nonlocal", "not", "or",   "pass",   "raise",  "return", "try",
        "while", "with",  "yield",   "match", "case"};
    return s;
}

struct LogicalLine {
    std::string text;    // comments stripped, strings preserved
    size_t offset = 0;   // byte offset of the first physical line
    size_t end = 0;      // byte offset just past the last physical line (newline excluded)
    int indent = 0;      // leading spaces, tabs expanded to 4
    int line = 0;        // 1-based physical line number of the first line
    bool blank = false;
};

// Removes comments, tracks strings, and joins continuation lines.
std::vector<LogicalLine> logical_lines(const std::string& src) {
    util::LineIndex idx(src);
    std::vector<LogicalLine> out;
    int nlines = idx.line_count();
    int depth = 0;
    bool in_triple = false;
    char triple_quote = '"';
    LogicalLine current;
    bool open = false;

    for (int ln = 1; ln <= nlines; ++ln) {
        std::string_view raw = idx.line_text(ln);
        std::string cleaned;
        cleaned.reserve(raw.size());
        bool backslash_cont = false;

        size_t i = 0;
        if (!open && !in_triple) {
            int indent = 0;
            while (i < raw.size() && (raw[i] == ' ' || raw[i] == '\t')) {
                indent += raw[i] == '\t' ? 4 : 1;
                ++i;
            }
            current = LogicalLine{};
            current.offset = idx.line_begin(ln) ;
            current.line = ln;
            current.indent = indent;
            open = true;
        }

        while (i < raw.size()) {
            char c = raw[i];
            if (in_triple) {
                if (c == triple_quote && raw.substr(i).size() >= 3 &&
                    raw[i + 1] == triple_quote && raw[i + 2] == triple_quote) {
                    in_triple = false;
                    i += 3;
                    cleaned += "\"\"";  // keep a token so the line is not blank
                    continue;
                }
                ++i;
                continue;
            }
            if (c == '#') break;
            if (c == '"' || c == '\'') {
                if (raw.substr(i).size() >= 3 && raw[i + 1] == c && raw[i + 2] == c) {
                    in_triple = true;
                    triple_quote = c;
                    i += 3;
                    continue;
                }
                char quote = c;
                cleaned += '"';
                ++i;
                while (i < raw.size() && raw[i] != quote) {
                    if (raw[i] == '\\' && i + 1 < raw.size()) ++i;
                    ++i;
                }
                if (i < raw.size()) ++i;
                cleaned += '"';
                continue;
            }
            if (c == '(' || c == '[' || c == '{') ++depth;
            if (c == ')' || c == ']' || c == '}') --depth;
            if (c == '\\' && i + 1 == raw.size()) {
                backslash_cont = true;
                ++i;
                continue;
            }
            cleaned += c;
            ++i;
        }

        current.text += cleaned;
        current.end = idx.line_end(ln);
        if (depth > 0 || backslash_cont || in_triple) {
            current.text += " ";
            continue;  // logical line continues
        }
        current.blank = util::trim(current.text).empty();
        out.push_back(current);
        open = false;
    }
    if (depth > 0) {
        throw SyntaxError("unbalanced brackets at end of file", nlines, 1);
    }
    if (in_triple) {
        throw SyntaxError("unterminated triple-quoted string", nlines, 1);
    }
    if (open && !util::trim(current.text).empty()) {
        current.blank = false;
        out.push_back(current);
    }
    return out;
}

Visibility python_visibility(const std::string& name) {
    if (util::starts_with(name, "__") && !util::ends_with(name, "__"))
        return Visibility::name_mangled;
    if (util::starts_with(name, "_") && !util::starts_with(name, "__"))
        return Visibility::protected_vis;
    return Visibility::public_vis;
}

// Parses "name: ann = default" parameter text into Params; self/cls dropped.
std::vector<Param> parse_python_params(const std::string& inside, bool is_method) {
    std::vector<Param> out;
    std::vector<std::string> parts;
    int depth = 0;
    std::string cur;
    for (char c : inside) {
        if (c == '(' || c == '[' || c == '{') ++depth;
        if (c == ')' || c == ']' || c == '}') --depth;
        if (c == ',' && depth == 0) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!util::trim(cur).empty()) parts.push_back(cur);

    bool first = true;
    for (auto& p : parts) {
        std::string t = util::trim(p);
        if (t.empty() || t == "*" || t == "/") continue;
        while (!t.empty() && t[0] == '*') t = t.substr(1);
        std::string ann;
        auto colon = t.find(':');
        auto eq = t.find('=');
        if (colon != std::string::npos && (eq == std::string::npos || colon < eq)) {
            size_t ann_end = eq == std::string::npos ? t.size() : eq;
            ann = util::trim(t.substr(colon + 1, ann_end - colon - 1));
            t = util::trim(t.substr(0, colon));
        } else if (eq != std::string::npos) {
            t = util::trim(t.substr(0, eq));
        }
        if (first && is_method && (t == "self" || t == "cls")) {
            first = false;
            continue;
        }
        first = false;
        if (t.empty()) continue;
        Param param;
        param.name = t;
        if (!ann.empty()) {
            // strip subscripts: List[int] -> List
            auto br = ann.find('[');
            param.type = TypeRef{br == std::string::npos ? ann : ann.substr(0, br), "",
                                 TypeClass::unresolved};
        }
        out.push_back(param);
    }
    return out;
}

struct PyCallScan {
    std::vector<RawCall> calls;
};

bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

void scan_python_line(const std::string& text, size_t base_offset, PyCallScan& out) {
    size_t n = text.size();
    size_t i = 0;
    while (i < n) {
        char c = text[i];
        if (c == '"') {  // strings were normalized to "" by the slicer
            ++i;
            while (i < n && text[i] != '"') ++i;
            if (i < n) ++i;
            continue;
        }
        if (!ident_char(c)) {
            ++i;
            continue;
        }
        size_t start = i;
        while (i < n && ident_char(text[i])) ++i;
        std::string word = text.substr(start, i - start);
        if (std::isdigit(static_cast<unsigned char>(word[0]))) continue;

        // Skip names declared by def/class headers.
        if (word == "def" || word == "class") {
            while (i < n && text[i] == ' ') ++i;
            while (i < n && ident_char(text[i])) ++i;
            continue;
        }
        if (python_keywords().count(word)) continue;

        // Build the dotted chain.
        std::vector<std::string> chain{word};
        std::vector<size_t> offsets{start};
        while (i < n && text[i] == '.') {
            size_t j = i + 1;
            size_t name_start = j;
            while (j < n && ident_char(text[j])) ++j;
            if (j == name_start) break;
            chain.push_back(text.substr(name_start, j - name_start));
            offsets.push_back(name_start);
            i = j;
        }
        if (i < n && text[i] == '(') {
            bool expr_receiver = start > 0 && (text[start - 1] == ')' || text[start - 1] == ']');
            RawCall rc;
            rc.callee_name = chain.back();
            chain.pop_back();
            if (!chain.empty() && chain.front() == "self") chain.erase(chain.begin());
            std::string receiver;
            for (const auto& part : chain) {
                if (!receiver.empty()) receiver += ".";
                receiver += part;
            }
            if (expr_receiver) receiver = "<expr>";
            rc.receiver_name = receiver;
            rc.offset = base_offset + offsets.back();
            // argument count: top-level commas inside the parens
            int depth = 0;
            bool any = false;
            int commas = 0;
            for (size_t k = i; k < n; ++k) {
                char ck = text[k];
                if (ck == '(' || ck == '[' || ck == '{') ++depth;
                else if (ck == ')' || ck == ']' || ck == '}') {
                    --depth;
                    if (depth == 0) break;
                } else if (ck == ',' && depth == 1)
                    ++commas;
                else if (depth >= 1 && !std::isspace(static_cast<unsigned char>(ck)))
                    any = true;
            }
            rc.arg_count = (!any && commas == 0) ? 0 : commas + 1;
            out.calls.push_back(rc);
        }
    }
}

struct Scope {
    enum Kind { module_scope, class_scope, def_scope, suppressed } kind;
    int indent;             // indent of the header line
    TypeDecl* type = nullptr;
    Callable* callable = nullptr;
    size_t last_end = 0;    // end offset of the last content line in the scope
};

class PythonParser {
public:
    PythonParser(const std::string& src, const std::string& path) : src_(src), path_(path) {}

    std::unique_ptr<CodeUnit> parse() {
        auto unit = std::make_unique<CodeUnit>();
        unit->language = Language::python;
        unit->path = path_;
        unit->source_text = src_;
        unit->package_name = module_name_from_path(path_);

        auto lines = logical_lines(src_);
        std::vector<Scope> stack{{Scope::module_scope, -1, nullptr, nullptr, 0}};
        std::vector<std::string> pending_decorators;

        for (const auto& ll : lines) {
            if (ll.blank) continue;
            std::string body = util::trim(ll.text);
            reject_non_python(body, ll.line);

            // Close scopes that this line's indent exits.
            while (stack.size() > 1 && ll.indent <= stack.back().indent) {
                close_scope(stack.back());
                stack.pop_back();
            }
            Scope& parent = stack.back();
            if (parent.kind != Scope::module_scope) parent.last_end = ll.end;
            for (auto& sc : stack) sc.last_end = std::max(sc.last_end, ll.end);

            if (util::starts_with(body, "@")) {
                std::string deco = body.substr(1);
                auto paren = deco.find('(');
                if (paren != std::string::npos) deco = deco.substr(0, paren);
                pending_decorators.push_back(util::trim(deco));
                continue;
            }

            if (util::starts_with(body, "import ") || util::starts_with(body, "from ")) {
                parse_import(body, *unit, ll);
                pending_decorators.clear();
                continue;
            }

            bool is_async = util::starts_with(body, "async ");
            std::string head = is_async ? util::trim(body.substr(5)) : body;

            if (util::starts_with(head, "class ") || head == "class") {
                handle_class(head, ll, *unit, stack, pending_decorators);
                pending_decorators.clear();
                continue;
            }
            if (util::starts_with(head, "def ") || head == "def") {
                handle_def(head, ll, *unit, stack, pending_decorators);
                pending_decorators.clear();
                continue;
            }
            pending_decorators.clear();

            // Plain statement: contributes call sites to the enclosing def.
            Callable* encl = enclosing_callable(stack);
            if (encl) {
                PyCallScan scan;
                scan_python_line(ll.text, ll.offset, scan);
                append_calls(*encl, scan, ll.line);
            }
        }
        while (stack.size() > 1) {
            close_scope(stack.back());
            stack.pop_back();
        }
        attach_backrefs(*unit);
        return unit;
    }

private:
    // Cheap well-formedness screen on a cleaned statement line; catches prose
    // that slips through the line-oriented grammar ("Sure! Here it is.").
    static void reject_non_python(const std::string& cleaned, int line) {
        for (size_t i = 0; i < cleaned.size(); ++i) {
            if (cleaned[i] == '?')
                throw SyntaxError("invalid character '?'", line, static_cast<int>(i + 1));
            if (cleaned[i] == '!' && (i + 1 >= cleaned.size() || cleaned[i + 1] != '='))
                throw SyntaxError("invalid character '!'", line, static_cast<int>(i + 1));
        }
        if (util::ends_with(cleaned, ".") && !util::ends_with(cleaned, "..")) {
            throw SyntaxError("statement ends with '.'", line,
                              static_cast<int>(cleaned.size()));
        }
    }

    static std::string module_name_from_path(const std::string& path) {
        if (path.empty()) return "";
        std::string p = path;
        if (util::ends_with(p, ".py")) p = p.substr(0, p.size() - 3);
        for (auto& c : p)
            if (c == '/' || c == '\\') c = '.';
        while (util::starts_with(p, ".")) p = p.substr(1);
        return p;
    }

    static Callable* enclosing_callable(std::vector<Scope>& stack) {
        for (auto it = stack.rbegin(); it != stack.rend(); ++it) {
            if (it->kind == Scope::def_scope) return it->callable;
            if (it->kind == Scope::suppressed) return it->callable;
        }
        return nullptr;
    }

    void append_calls(Callable& c, const PyCallScan& scan, int line) {
        for (const auto& rc : scan.calls) {
            CallSite cs;
            cs.callee_name = rc.callee_name;
            cs.receiver_name = rc.receiver_name;
            cs.arg_count = rc.arg_count;
            cs.span = Span{rc.offset, rc.offset + rc.callee_name.size()};
            cs.line = line;
            c.call_sites.push_back(std::move(cs));
        }
    }

    void close_scope(Scope& sc) {
        if (sc.kind == Scope::def_scope && sc.callable) {
            if (sc.callable->body_span.end < sc.callable->body_span.begin)
                sc.callable->body_span.end = sc.callable->body_span.begin;
            if (sc.last_end > sc.callable->body_span.begin)
                sc.callable->body_span.end = sc.last_end;
        }
        if (sc.kind == Scope::class_scope && sc.type) {
            if (sc.last_end > sc.type->span.begin) sc.type->span.end = sc.last_end;
        }
    }

    void parse_import(const std::string& body, CodeUnit& unit, const LogicalLine& ll) {
        (void)ll;
        if (util::starts_with(body, "import ")) {
            // import a.b as c, d
            for (auto& part : util::split(body.substr(7), ',')) {
                std::string t = util::trim(part);
                if (t.empty()) continue;
                Import imp;
                auto as_pos = t.find(" as ");
                if (as_pos != std::string::npos) {
                    imp.alias = util::trim(t.substr(as_pos + 4));
                    t = util::trim(t.substr(0, as_pos));
                }
                imp.qualified = t;
                unit.imports.push_back(imp);
            }
            return;
        }
        // from m import x, y as z | from m import *
        auto import_pos = body.find(" import ");
        if (import_pos == std::string::npos) return;
        std::string module = util::trim(body.substr(5, import_pos - 5));
        std::string rest = util::trim(body.substr(import_pos + 8));
        if (rest == "*") {
            Import imp;
            imp.qualified = module;
            imp.wildcard = true;
            unit.imports.push_back(imp);
            return;
        }
        if (!rest.empty() && rest.front() == '(') rest = rest.substr(1);
        if (!rest.empty() && rest.back() == ')') rest.pop_back();
        for (auto& part : util::split(rest, ',')) {
            std::string t = util::trim(part);
            if (t.empty()) continue;
            Import imp;
            auto as_pos = t.find(" as ");
            if (as_pos != std::string::npos) {
                imp.alias = util::trim(t.substr(as_pos + 4));
                t = util::trim(t.substr(0, as_pos));
            }
            imp.qualified = module + "." + t;
            unit.imports.push_back(imp);
        }
    }

    void handle_class(const std::string& head, const LogicalLine& ll, CodeUnit& unit,
                      std::vector<Scope>& stack, const std::vector<std::string>& decorators) {
        std::string rest = util::trim(head.substr(5));
        size_t i = 0;
        while (i < rest.size() && ident_char(rest[i])) ++i;
        std::string name = rest.substr(0, i);
        if (name.empty()) throw SyntaxError("expected class name", ll.line, 1);
        std::string tail = util::trim(rest.substr(i));
        if (tail.empty() || tail.back() != ':')
            throw SyntaxError("expected ':' after class header", ll.line,
                              static_cast<int>(ll.text.size()));

        // Nested declarations inside functions are not modeled.
        if (stack.back().kind == Scope::def_scope || stack.back().kind == Scope::suppressed) {
            stack.push_back({Scope::suppressed, ll.indent, nullptr, stack.back().callable, ll.end});
            return;
        }

        auto decl = std::make_unique<TypeDecl>();
        Scope* cls_parent = stack.back().kind == Scope::class_scope ? &stack.back() : nullptr;
        std::string qualifier =
            cls_parent && cls_parent->type ? cls_parent->type->qualified_name + "$" : "";
        if (qualifier.empty() && !unit.package_name.empty())
            qualifier = unit.package_name + ".";
        decl->qualified_name = qualifier + name;
        decl->kind = TypeKind::class_type;
        decl->visibility = python_visibility(name);
        decl->line = ll.line;
        decl->span = Span{ll.offset, ll.end};

        // Base list: abstract when deriving from ABC / using ABCMeta.
        if (!tail.empty() && tail.front() == '(') {
            auto close = tail.rfind(')');
            std::string inside = close == std::string::npos ? "" : tail.substr(1, close - 1);
            for (auto& base : util::split(inside, ',')) {
                std::string b = util::trim(base);
                if (b.empty()) continue;
                if (b == "ABC" || b == "abc.ABC" || b.find("ABCMeta") != std::string::npos) {
                    decl->kind = TypeKind::abstract_class;
                    continue;
                }
                if (b.find('=') != std::string::npos) continue;  // keyword args
                TypeRef t{b, "", TypeClass::unresolved};
                if (!decl->superclass)
                    decl->superclass = t;
                else
                    decl->interfaces.push_back(t);
            }
        }
        for (const auto& d : decorators)
            if (d == "abstractclass") decl->kind = TypeKind::abstract_class;

        TypeDecl* raw = decl.get();
        unit.types.push_back(std::move(decl));
        stack.push_back({Scope::class_scope, ll.indent, raw, nullptr, ll.end});
    }

    void handle_def(const std::string& head, const LogicalLine& ll, CodeUnit& unit,
                    std::vector<Scope>& stack, const std::vector<std::string>& decorators) {
        std::string rest = util::trim(head.substr(3));
        size_t i = 0;
        while (i < rest.size() && ident_char(rest[i])) ++i;
        std::string name = rest.substr(0, i);
        std::string tail = util::trim(rest.substr(i));
        if (name.empty()) throw SyntaxError("expected function name", ll.line, 1);
        if (tail.empty() || tail.front() != '(')
            throw SyntaxError("expected parameter list", ll.line, 1);
        // Find matching close paren.
        int depth = 0;
        size_t close = std::string::npos;
        for (size_t k = 0; k < tail.size(); ++k) {
            if (tail[k] == '(') ++depth;
            else if (tail[k] == ')') {
                --depth;
                if (depth == 0) {
                    close = k;
                    break;
                }
            }
        }
        if (close == std::string::npos)
            throw SyntaxError("unbalanced parameter list", ll.line, 1);
        std::string after = util::trim(tail.substr(close + 1));
        std::string ret_ann;
        if (util::starts_with(after, "->")) {
            auto colon = after.rfind(':');
            if (colon == std::string::npos)
                throw SyntaxError("expected ':' after def header", ll.line, 1);
            ret_ann = util::trim(after.substr(2, colon - 2));
            after = after.substr(colon);
        }
        if (after.empty() || after.front() != ':')
            throw SyntaxError("expected ':' after def header", ll.line, 1);
        std::string inline_body = util::trim(after.substr(1));

        bool in_class = stack.back().kind == Scope::class_scope;
        bool in_def =
            stack.back().kind == Scope::def_scope || stack.back().kind == Scope::suppressed;

        if (in_def) {
            // Nested function: its statements still belong to the outer callable.
            stack.push_back({Scope::suppressed, ll.indent, nullptr, stack.back().callable, ll.end});
            return;
        }

        auto c = std::make_unique<Callable>();
        c->name = name;
        c->kind = in_class ? (name == "__init__" ? CallableKind::constructor
                                                 : CallableKind::method)
                           : CallableKind::function;
        c->visibility =
            c->kind == CallableKind::constructor ? Visibility::public_vis : python_visibility(name);
        c->annotations = decorators;
        bool is_static_deco = false;
        for (const auto& d : decorators) {
            if (d == "staticmethod" || d == "classmethod") is_static_deco = true;
            if (d == "abstractmethod" || d == "abc.abstractmethod") c->is_abstract = true;
        }
        c->is_static = in_class && is_static_deco;
        c->params = parse_python_params(tail.substr(1, close - 1),
                                        in_class && !is_static_deco);
        if (!ret_ann.empty()) {
            auto br = ret_ann.find('[');
            c->return_type =
                TypeRef{br == std::string::npos ? ret_ann : ret_ann.substr(0, br), "",
                        TypeClass::unresolved};
        }
        c->line = ll.line;
        c->decl_span = Span{ll.offset, ll.end};
        c->body_span = Span{ll.end, ll.end};

        Callable* raw = c.get();
        if (in_class)
            stack.back().type->callables.push_back(std::move(c));
        else
            unit.functions.push_back(std::move(c));

        if (!inline_body.empty()) {
            // One-liner: def f(): return x — body is the raw text after the
            // header colon, so re-scanning the span reproduces the call sites.
            size_t colon = raw_header_colon(ll);
            size_t body_off = colon == std::string::npos ? ll.end : colon + 1;
            raw->body_span = Span{body_off, ll.end};
            PyCallScan scan;
            std::string tail(src_.substr(body_off, ll.end - body_off));
            for (const auto& rc : scan_calls(tail, Language::python)) {
                RawCall shifted = rc;
                shifted.offset += body_off;
                scan.calls.push_back(shifted);
            }
            append_calls(*raw, scan, ll.line);
            stack.push_back({Scope::def_scope, ll.indent, nullptr, raw, ll.end});
            return;
        }
        raw->body_span = Span{ll.end + 1 > src_.size() ? src_.size() : ll.end + 1, ll.end};
        stack.push_back({Scope::def_scope, ll.indent, nullptr, raw, ll.end});
    }

    // Offset of the def header's terminating ':' in the raw source.
    size_t raw_header_colon(const LogicalLine& ll) const {
        int depth = 0;
        bool in_str = false;
        char quote = '"';
        for (size_t i = ll.offset; i < ll.end && i < src_.size(); ++i) {
            char c = src_[i];
            if (in_str) {
                if (c == '\\') ++i;
                else if (c == quote) in_str = false;
                continue;
            }
            if (c == '"' || c == '\'') {
                in_str = true;
                quote = c;
                continue;
            }
            if (c == '(' || c == '[' || c == '{') ++depth;
            else if (c == ')' || c == ']' || c == '}') --depth;
            else if (c == ':' && depth == 0)
                return i;
        }
        return std::string::npos;
    }

    const std::string& src_;
    std::string path_;
};

}  // namespace

std::unique_ptr<CodeUnit> parse_python_unit(const std::string& source_text,
                                            const std::string& path) {
    PythonParser p(source_text, path);
    return p.parse();
}

std::vector<RawCall> scan_python_calls(std::string_view body) {
    PyCallScan scan;
    std::string text(body);
    auto lines = logical_lines(text);
    for (const auto& ll : lines) {
        if (ll.blank) continue;
        std::string trimmed = util::trim(ll.text);
        // Declaration headers, decorators, and imports are structure, not
        // statements; the full parser treats them the same way.
        if (util::starts_with(trimmed, "import ") || util::starts_with(trimmed, "from ") ||
            util::starts_with(trimmed, "def ") || util::starts_with(trimmed, "class ") ||
            util::starts_with(trimmed, "async def ") || util::starts_with(trimmed, "@"))
            continue;
        scan_python_line(ll.text, ll.offset, scan);
    }
    return scan.calls;
}

// Dispatchers shared with the Java half.
std::unique_ptr<CodeUnit> parse_java_unit(const std::string& source_text,
                                          const std::string& path);
std::vector<RawCall> scan_java_calls(std::string_view body);

std::unique_ptr<CodeUnit> parse_unit(const std::string& source_text, Language language,
                                     const std::string& path) {
    if (language == Language::java) return parse_java_unit(source_text, path);
    return parse_python_unit(source_text, path);
}

std::vector<RawCall> scan_calls(std::string_view body, Language language) {
    if (language == Language::java) return scan_java_calls(body);
    return scan_python_calls(body);
}

bool parses(const std::string& source_text, Language language) {
    try {
        parse_unit(source_text, language);
        return true;
    } catch (const SyntaxError&) {
        return false;
    }
}

}  // namespace testgen::model
