#include "testgen/pipeline/coverage.hpp"

#include <algorithm>
#include <set>

#include <nlohmann/json.hpp>

#include "testgen/util/text.hpp"

namespace testgen::pipeline {

using nlohmann::json;

const FileCoverage* CoverageReport::find_file(const std::string& path) const {
    auto it = files.find(path);
    if (it != files.end()) return &it->second;
    // Tolerate path-prefix differences between tools and the model: fall back
    // to a unique suffix match.
    const FileCoverage* found = nullptr;
    for (const auto& [key, cov] : files) {
        bool suffix = util::ends_with(path, "/" + key) || util::ends_with(key, "/" + path) ||
                      key == path;
        if (suffix) {
            if (found) return nullptr;  // ambiguous
            found = &cov;
        }
    }
    return found;
}

double CoverageReport::line_coverage(const std::string& path) const {
    const FileCoverage* f = find_file(path);
    if (!f || f->line_hits.empty()) return 1.0;
    size_t covered = 0;
    for (const auto& [line, hits] : f->line_hits)
        if (hits > 0) ++covered;
    return static_cast<double>(covered) / static_cast<double>(f->line_hits.size());
}

double CoverageReport::branch_coverage(const std::string& path) const {
    const FileCoverage* f = find_file(path);
    if (!f || f->branches.empty()) return 0.0;
    int covered = 0, total = 0;
    for (const auto& [line, counts] : f->branches) {
        covered += counts.first;
        total += counts.second;
    }
    return total == 0 ? 0.0 : static_cast<double>(covered) / static_cast<double>(total);
}

std::vector<int> CoverageReport::uncovered_lines(const std::string& path) const {
    std::vector<int> out;
    const FileCoverage* f = find_file(path);
    if (!f) return out;
    for (const auto& [line, hits] : f->line_hits)
        if (hits == 0) out.push_back(line);
    return out;
}

namespace {

// Minimal attribute scanner for the one XML shape we ingest.
std::map<std::string, std::string> read_attributes(std::string_view tag) {
    std::map<std::string, std::string> attrs;
    size_t i = 0;
    while (i < tag.size()) {
        while (i < tag.size() && (std::isspace(static_cast<unsigned char>(tag[i])) || tag[i] == '/'))
            ++i;
        size_t name_start = i;
        while (i < tag.size() && tag[i] != '=' && !std::isspace(static_cast<unsigned char>(tag[i])))
            ++i;
        if (i >= tag.size() || tag[i] != '=') break;
        std::string name(tag.substr(name_start, i - name_start));
        ++i;
        if (i >= tag.size() || (tag[i] != '"' && tag[i] != '\'')) break;
        char quote = tag[i++];
        size_t val_start = i;
        while (i < tag.size() && tag[i] != quote) ++i;
        attrs[name] = std::string(tag.substr(val_start, i - val_start));
        if (i < tag.size()) ++i;
    }
    return attrs;
}

}  // namespace

CoverageReport parse_line_hit_xml(const std::string& xml_text) {
    CoverageReport report;
    std::string current_package;
    std::string current_file;
    size_t i = 0;
    while ((i = xml_text.find('<', i)) != std::string::npos) {
        size_t end = xml_text.find('>', i);
        if (end == std::string::npos) break;
        std::string_view tag(xml_text.data() + i + 1, end - i - 1);
        i = end + 1;
        if (tag.empty() || tag[0] == '!' || tag[0] == '?') continue;
        bool closing = tag[0] == '/';
        if (closing) {
            if (tag == "/sourcefile") current_file.clear();
            if (tag == "/package") current_package.clear();
            continue;
        }
        size_t sp = tag.find_first_of(" \t/");
        std::string name(tag.substr(0, sp == std::string_view::npos ? tag.size() : sp));
        auto attrs = read_attributes(tag.substr(name.size()));
        if (name == "package") {
            current_package = attrs.count("name") ? attrs["name"] : "";
        } else if (name == "sourcefile") {
            current_file = attrs.count("name") ? attrs["name"] : "";
            if (!current_package.empty()) current_file = current_package + "/" + current_file;
            report.files[current_file];
        } else if (name == "line" && !current_file.empty()) {
            int nr = attrs.count("nr") ? std::stoi(attrs["nr"]) : 0;
            int ci = attrs.count("ci") ? std::stoi(attrs["ci"]) : 0;
            int cb = attrs.count("cb") ? std::stoi(attrs["cb"]) : 0;
            int mb = attrs.count("mb") ? std::stoi(attrs["mb"]) : 0;
            if (nr > 0) {
                report.files[current_file].line_hits[nr] = ci;
                if (cb + mb > 0) report.files[current_file].branches[nr] = {cb, cb + mb};
            }
        }
    }
    return report;
}

CoverageReport parse_line_hit_json(const std::string& json_text) {
    CoverageReport report;
    json parsed = json::parse(json_text, nullptr, false);
    if (parsed.is_discarded() || !parsed.contains("files")) return report;
    for (auto it = parsed["files"].begin(); it != parsed["files"].end(); ++it) {
        FileCoverage cov;
        const json& f = it.value();
        if (f.contains("executed_lines"))
            for (const auto& l : f["executed_lines"]) cov.line_hits[l.get<int>()] = 1;
        if (f.contains("missing_lines"))
            for (const auto& l : f["missing_lines"]) cov.line_hits[l.get<int>()] = 0;
        auto branch_line = [](const json& b) {
            return b.is_array() && !b.empty() ? b[0].get<int>() : 0;
        };
        if (f.contains("executed_branches"))
            for (const auto& b : f["executed_branches"]) {
                int line = branch_line(b);
                auto& entry = cov.branches[line];
                ++entry.first;
                ++entry.second;
            }
        if (f.contains("missing_branches"))
            for (const auto& b : f["missing_branches"]) {
                int line = branch_line(b);
                ++cov.branches[line].second;
            }
        report.files[it.key()] = std::move(cov);
    }
    return report;
}

std::vector<int> executable_lines(const model::CodeUnit& unit) {
    std::set<int> lines;
    util::LineIndex idx(unit.source_text);
    std::string_view comment = unit.language == model::Language::java ? "//" : "#";
    for (const model::Callable* c : unit.all_callables()) {
        if (c->body_span.empty()) continue;
        int first = idx.line_of(c->body_span.begin);
        int last = idx.line_of(c->body_span.end > 0 ? c->body_span.end - 1 : 0);
        for (int ln = first; ln <= last; ++ln) {
            // Only the part of the line inside the body span counts, so a
            // signature line ending in '{' contributes nothing.
            size_t lb = std::max(idx.line_begin(ln), c->body_span.begin);
            size_t le = std::min(idx.line_end(ln), c->body_span.end);
            if (lb >= le) continue;
            std::string_view portion(unit.source_text.data() + lb, le - lb);
            if (util::is_code_line(portion, comment)) lines.insert(ln);
        }
    }
    return {lines.begin(), lines.end()};
}

std::vector<std::pair<const model::Callable*, bool>> infer_method_coverage(
    const CoverageReport& report, const model::CodeUnit& unit) {
    std::vector<std::pair<const model::Callable*, bool>> out;
    const FileCoverage* cov = report.find_file(unit.path);
    util::LineIndex idx(unit.source_text);
    for (const model::Callable* c : unit.all_callables()) {
        if (c->body_span.empty()) continue;
        bool covered = false;
        if (cov) {
            int first = idx.line_of(c->body_span.begin);
            int last = idx.line_of(c->body_span.end > 0 ? c->body_span.end - 1 : 0);
            auto it = cov->line_hits.lower_bound(first);
            for (; it != cov->line_hits.end() && it->first <= last; ++it) {
                if (it->second > 0) {
                    covered = true;
                    break;
                }
            }
        }
        out.emplace_back(c, covered);
    }
    return out;
}

double method_coverage_fraction(const CoverageReport& report, const model::CodeUnit& unit) {
    auto flags = infer_method_coverage(report, unit);
    if (flags.empty()) return 0.0;
    size_t covered = 0;
    for (const auto& [c, flag] : flags)
        if (flag) ++covered;
    return static_cast<double>(covered) / static_cast<double>(flags.size());
}

}  // namespace testgen::pipeline
