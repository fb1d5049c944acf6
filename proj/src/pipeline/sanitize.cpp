#include "testgen/pipeline/sanitize.hpp"

#include <optional>

#include "testgen/error.hpp"
#include "testgen/model/parser.hpp"
#include "testgen/util/text.hpp"

namespace testgen::pipeline {

namespace {

using model::Language;

struct FencedBlock {
    std::string tag;
    std::string content;
};

std::vector<FencedBlock> extract_fences(const std::string& text) {
    std::vector<FencedBlock> out;
    auto lines = util::split_lines(text);
    bool in_fence = false;
    FencedBlock cur;
    for (const auto& line : lines) {
        std::string t = util::trim(line);
        if (util::starts_with(t, "```")) {
            if (!in_fence) {
                cur = FencedBlock{};
                cur.tag = util::to_lower(util::trim(t.substr(3)));
                in_fence = true;
            } else {
                out.push_back(cur);
                in_fence = false;
            }
            continue;
        }
        if (in_fence) cur.content += line + "\n";
    }
    return out;
}

// A unit counts as test content only if it declares something.
bool parses_with_content(const std::string& text, Language lang) {
    try {
        auto unit = model::parse_unit(text, lang);
        return unit->declaration_count() > 0;
    } catch (const SyntaxError&) {
        return false;
    }
}

// Hoists package/import lines and wraps the remainder in a test class.
std::optional<std::string> wrap_java_methods(const std::string& text) {
    auto lines = util::split_lines(text);
    std::string head, body;
    for (const auto& line : lines) {
        std::string t = util::trim(line);
        if (util::starts_with(t, "import ") || util::starts_with(t, "package "))
            head += t + "\n";
        else
            body += line + "\n";
    }
    if (util::trim(body).empty()) return std::nullopt;
    std::string wrapped = head + "public class GeneratedTest {\n" + body + "}\n";
    if (parses_with_content(wrapped, Language::java)) return wrapped;
    return std::nullopt;
}

std::optional<std::string> accept(const std::string& candidate, Language lang) {
    if (util::trim(candidate).empty()) return std::nullopt;
    if (parses_with_content(candidate, lang)) return candidate;
    if (lang == Language::java) {
        if (auto wrapped = wrap_java_methods(candidate)) return wrapped;
    }
    return std::nullopt;
}

std::string normalize_imports(const std::string& text, Language lang) {
    if (lang != Language::java) return text;
    // Deduplicate import lines, preserving first occurrence order; identity
    // when there is nothing to collapse.
    auto lines = util::split_lines(text);
    std::vector<std::string> out;
    std::vector<std::string> seen_imports;
    bool changed = false;
    for (const auto& line : lines) {
        std::string t = util::trim(line);
        if (util::starts_with(t, "import ")) {
            if (std::find(seen_imports.begin(), seen_imports.end(), t) != seen_imports.end()) {
                changed = true;
                continue;
            }
            seen_imports.push_back(t);
        }
        out.push_back(line);
    }
    if (!changed) return text;
    return util::join(out, "\n") + "\n";
}

}  // namespace

std::string sanitize(const std::string& raw_text, Language language) {
    if (util::trim(raw_text).empty())
        throw UnsalvageableError("completion is empty");

    std::string lang_tag = language == Language::java ? "java" : "python";
    auto blocks = extract_fences(raw_text);

    // Tagged blocks first, then untagged, then anything else.
    std::vector<const FencedBlock*> ordered;
    for (const auto& b : blocks)
        if (b.tag == lang_tag || (language == Language::python && b.tag == "py"))
            ordered.push_back(&b);
    for (const auto& b : blocks)
        if (b.tag.empty()) ordered.push_back(&b);
    for (const auto& b : blocks)
        if (std::find(ordered.begin(), ordered.end(), &b) == ordered.end()) ordered.push_back(&b);

    for (const FencedBlock* b : ordered) {
        if (auto ok = accept(b->content, language)) return normalize_imports(*ok, language);
    }
    if (!blocks.empty()) {
        // All blocks individually unusable; try them joined.
        std::string joined;
        for (const FencedBlock* b : ordered) joined += b->content;
        if (auto ok = accept(joined, language)) return normalize_imports(*ok, language);
    }

    if (auto ok = accept(raw_text, language)) return normalize_imports(*ok, language);

    // Longest parseable region: drop leading lines, then trailing lines.
    auto lines = util::split_lines(raw_text);
    const size_t max_lines = 400;
    if (lines.size() > max_lines) lines.resize(max_lines);
    std::optional<std::string> best;
    for (size_t start = 0; start < lines.size(); ++start) {
        // Cheap gate: a region must begin at a plausible code line.
        std::string first = util::trim(lines[start]);
        if (first.empty()) continue;
        for (size_t end = lines.size(); end > start; --end) {
            size_t len = 0;
            std::string candidate;
            for (size_t i = start; i < end; ++i) {
                candidate += lines[i];
                candidate += "\n";
            }
            len = candidate.size();
            if (best && best->size() >= len) break;
            if (auto ok = accept(candidate, language)) {
                if (!best || ok->size() > best->size()) best = ok;
                break;
            }
        }
    }
    if (best) return normalize_imports(*best, language);
    throw UnsalvageableError("no parseable test content in completion");
}

}  // namespace testgen::pipeline
