#include "testgen/pipeline/fake_adapter.hpp"

#include "testgen/error.hpp"
#include "testgen/model/parser.hpp"
#include "testgen/util/text.hpp"

namespace testgen::pipeline {

namespace {

struct Marker {
    std::string kind;
    std::string payload;
    int line;
};

std::vector<Marker> find_markers(const std::string& text) {
    std::vector<Marker> out;
    auto lines = util::split_lines(text);
    static const std::vector<std::string> kinds = {"COMPILE-ERROR", "LINT-ERROR", "LINT-WARNING",
                                                   "RUNTIME-FAIL", "RUNTIME-ERROR", "COVERS"};
    for (size_t i = 0; i < lines.size(); ++i) {
        for (const auto& kind : kinds) {
            auto pos = lines[i].find(kind + ":");
            if (pos == std::string::npos) continue;
            Marker m;
            m.kind = kind;
            m.payload = util::trim(lines[i].substr(pos + kind.size() + 1));
            m.line = static_cast<int>(i + 1);
            out.push_back(m);
        }
    }
    return out;
}

}  // namespace

void FakeToolchainAdapter::register_project(const model::CodeModel& project) {
    for (const auto& unit : project.units()) {
        auto lines = executable_lines(*unit);
        instrumentable_[unit->path] = std::set<int>(lines.begin(), lines.end());
    }
}

void FakeToolchainAdapter::register_file(const std::string& path, std::vector<int> lines) {
    instrumentable_[path] = std::set<int>(lines.begin(), lines.end());
}

std::vector<Diagnostic> FakeToolchainAdapter::compile(const std::vector<TestFile>& tests) {
    std::vector<Diagnostic> out;
    for (const auto& t : tests) {
        try {
            model::parse_unit(t.text, language_, t.path);
        } catch (const SyntaxError& e) {
            Diagnostic d;
            d.phase = Phase::parse;
            d.message = e.what();
            d.file = t.id;
            d.line = e.line();
            d.severity = Severity::error;
            d.category = "error";
            out.push_back(d);
            continue;
        }
        for (const auto& m : find_markers(t.text)) {
            Diagnostic d;
            d.file = t.id;
            d.line = m.line;
            d.message = m.payload;
            if (m.kind == "COMPILE-ERROR") {
                d.phase = Phase::compile;
                d.severity = Severity::error;
                d.category = "error";
            } else if (m.kind == "LINT-ERROR") {
                d.phase = Phase::lint;
                d.severity = Severity::error;
                d.category = "error";
            } else if (m.kind == "LINT-WARNING") {
                d.phase = Phase::lint;
                d.severity = Severity::warning;
                d.category = "warning";
            } else {
                continue;
            }
            out.push_back(d);
        }
    }
    return out;
}

std::vector<RunResult> FakeToolchainAdapter::run(const std::vector<TestFile>& tests) {
    std::vector<RunResult> out;
    for (const auto& t : tests) {
        RunResult r;
        r.id = t.id;
        r.passed = true;
        for (const auto& m : find_markers(t.text)) {
            if (m.kind == "RUNTIME-FAIL" || m.kind == "RUNTIME-ERROR") {
                r.passed = false;
                Diagnostic d;
                d.phase = m.kind == "RUNTIME-FAIL" ? Phase::assertion : Phase::runtime;
                d.message = m.payload;
                d.file = t.id;
                d.line = m.line;
                d.severity = Severity::error;
                r.failure = d;
                break;
            }
        }
        out.push_back(std::move(r));
    }
    return out;
}

CoverageReport FakeToolchainAdapter::coverage(const std::vector<TestFile>& tests) {
    CoverageReport report;
    for (const auto& [path, lines] : instrumentable_) {
        FileCoverage cov;
        for (int ln : lines) cov.line_hits[ln] = 0;
        report.files[path] = std::move(cov);
    }
    for (const auto& t : tests) {
        for (const auto& m : find_markers(t.text)) {
            if (m.kind != "COVERS") continue;
            auto colon = m.payload.rfind(':');
            if (colon == std::string::npos) continue;
            std::string path = util::trim(m.payload.substr(0, colon));
            auto it = report.files.find(path);
            if (it == report.files.end()) {
                // suffix-match against registered paths
                for (auto& [key, cov] : report.files) {
                    if (util::ends_with(key, "/" + path) || key == path) {
                        it = report.files.find(key);
                        break;
                    }
                }
            }
            if (it == report.files.end()) continue;
            for (const auto& num : util::split(m.payload.substr(colon + 1), ',')) {
                std::string n = util::trim(num);
                if (n.empty()) continue;
                int line = std::stoi(n);
                auto hit = it->second.line_hits.find(line);
                if (hit != it->second.line_hits.end()) ++hit->second;
            }
        }
    }
    return report;
}

}  // namespace testgen::pipeline
