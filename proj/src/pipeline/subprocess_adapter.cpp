#include "testgen/pipeline/subprocess_adapter.hpp"

#include <array>
#include <cstdio>
#include <filesystem>

#include "testgen/error.hpp"
#include "testgen/util/text.hpp"

namespace testgen::pipeline {

namespace fs = std::filesystem;

CommandResult run_command(const std::string& command, const std::string& workdir) {
    std::string full = command;
    if (!workdir.empty()) full = "cd '" + workdir + "' && (" + command + ")";
    full += " 2>&1";
    CommandResult result;
    FILE* pipe = popen(full.c_str(), "r");
    if (!pipe) throw IoError("cannot spawn command: " + command);
    std::array<char, 4096> buf{};
    size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) result.output.append(buf.data(), n);
    int status = pclose(pipe);
    result.exit_code = status == -1 ? -1 : WEXITSTATUS(status);
    return result;
}

std::vector<Diagnostic> parse_javac_diagnostics(const std::string& output) {
    std::vector<Diagnostic> out;
    for (const auto& line : util::split_lines(output)) {
        // Foo.java:12: error: ';' expected
        auto first = line.find(':');
        if (first == std::string::npos) continue;
        auto second = line.find(':', first + 1);
        if (second == std::string::npos) continue;
        std::string file = util::trim(line.substr(0, first));
        std::string lineno = util::trim(line.substr(first + 1, second - first - 1));
        if (file.empty() || lineno.empty() ||
            !std::all_of(lineno.begin(), lineno.end(),
                         [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
            continue;
        std::string rest = util::trim(line.substr(second + 1));
        Diagnostic d;
        d.phase = Phase::compile;
        d.file = file;
        d.line = std::stoi(lineno);
        if (util::starts_with(rest, "error:")) {
            d.severity = Severity::error;
            d.message = util::trim(rest.substr(6));
        } else if (util::starts_with(rest, "warning:")) {
            d.severity = Severity::warning;
            d.message = util::trim(rest.substr(8));
        } else {
            continue;
        }
        d.category = d.severity == Severity::error ? "error" : "warning";
        out.push_back(std::move(d));
    }
    return out;
}

std::vector<Diagnostic> parse_pylint_diagnostics(const std::string& output) {
    std::vector<Diagnostic> out;
    for (const auto& line : util::split_lines(output)) {
        // module.py:3:0: E0001: invalid syntax (syntax-error)
        auto p1 = line.find(':');
        if (p1 == std::string::npos) continue;
        auto p2 = line.find(':', p1 + 1);
        if (p2 == std::string::npos) continue;
        auto p3 = line.find(':', p2 + 1);
        if (p3 == std::string::npos) continue;
        auto p4 = line.find(':', p3 + 1);
        if (p4 == std::string::npos) continue;
        std::string lineno = util::trim(line.substr(p1 + 1, p2 - p1 - 1));
        std::string code = util::trim(line.substr(p3 + 1, p4 - p3 - 1));
        if (lineno.empty() || code.empty()) continue;
        if (!std::all_of(lineno.begin(), lineno.end(),
                         [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
            continue;
        if (!std::isalpha(static_cast<unsigned char>(code[0]))) continue;
        Diagnostic d;
        d.phase = Phase::lint;
        d.file = util::trim(line.substr(0, p1));
        d.line = std::stoi(lineno);
        d.message = code + ": " + util::trim(line.substr(p4 + 1));
        switch (code[0]) {
            case 'E':
            case 'F':
                d.severity = Severity::error;
                d.category = "error";
                break;
            case 'W':
                d.severity = Severity::warning;
                d.category = "warning";
                break;
            case 'C':
                d.severity = Severity::info;
                d.category = "convention";
                break;
            case 'R':
                d.severity = Severity::info;
                d.category = "refactor";
                break;
            default:
                d.severity = Severity::info;
                d.category = "other";
                break;
        }
        out.push_back(std::move(d));
    }
    return out;
}

SubprocessToolchainAdapter::SubprocessToolchainAdapter(SubprocessConfig config)
    : config_(std::move(config)) {
    if (config_.sandbox_dir.empty())
        throw ConfigError("subprocess adapter requires a sandbox directory");
    std::error_code ec;
    fs::create_directories(config_.sandbox_dir, ec);
    if (ec) throw IoError("cannot create sandbox: " + config_.sandbox_dir);
}

void SubprocessToolchainAdapter::write_tests(const std::vector<TestFile>& tests) {
    for (const auto& t : tests) {
        fs::path p = fs::path(config_.sandbox_dir) / t.path;
        std::error_code ec;
        fs::create_directories(p.parent_path(), ec);
        util::write_file(p.string(), t.text);
    }
}

std::vector<Diagnostic> SubprocessToolchainAdapter::compile(const std::vector<TestFile>& tests) {
    write_tests(tests);
    if (config_.compile_cmd.empty()) return {};
    std::string files;
    for (const auto& t : tests) {
        if (!files.empty()) files += " ";
        files += t.path;
    }
    std::string cmd = util::replace_all(config_.compile_cmd, "{files}", files);
    cmd = util::replace_all(cmd, "{sandbox}", config_.sandbox_dir);
    CommandResult result = run_command(cmd, config_.sandbox_dir);
    std::vector<Diagnostic> diags = config_.language == model::Language::java
                                        ? parse_javac_diagnostics(result.output)
                                        : parse_pylint_diagnostics(result.output);
    // Map tool file paths back to artifact ids.
    for (auto& d : diags) {
        for (const auto& t : tests) {
            if (d.file == t.path || util::ends_with(t.path, "/" + d.file) ||
                util::ends_with(d.file, "/" + t.path))
                d.file = t.id;
        }
    }
    if (diags.empty() && result.exit_code != 0) {
        Diagnostic d;
        d.phase = Phase::compile;
        d.severity = Severity::error;
        d.category = "error";
        d.message = "toolchain exited with status " + std::to_string(result.exit_code) + ": " +
                    util::trim(result.output.substr(0, 500));
        if (!tests.empty()) d.file = tests.front().id;
        diags.push_back(std::move(d));
    }
    return diags;
}

std::vector<RunResult> SubprocessToolchainAdapter::run(const std::vector<TestFile>& tests) {
    write_tests(tests);
    std::vector<RunResult> out;
    for (const auto& t : tests) {
        RunResult r;
        r.id = t.id;
        if (config_.run_cmd.empty()) {
            r.passed = true;
            out.push_back(std::move(r));
            continue;
        }
        std::string cmd = util::replace_all(config_.run_cmd, "{file}", t.path);
        cmd = util::replace_all(cmd, "{files}", t.path);
        cmd = util::replace_all(cmd, "{sandbox}", config_.sandbox_dir);
        CommandResult result = run_command(cmd, config_.sandbox_dir);
        r.passed = result.exit_code == 0;
        if (!r.passed) {
            Diagnostic d;
            bool assertion = result.output.find("AssertionError") != std::string::npos ||
                             result.output.find("assert") != std::string::npos;
            d.phase = assertion ? Phase::assertion : Phase::runtime;
            d.severity = Severity::error;
            d.file = t.id;
            std::string tail = result.output.size() > 1000
                                   ? result.output.substr(result.output.size() - 1000)
                                   : result.output;
            d.message = util::trim(tail);
            r.failure = std::move(d);
        }
        out.push_back(std::move(r));
    }
    return out;
}

CoverageReport SubprocessToolchainAdapter::coverage(const std::vector<TestFile>& tests) {
    write_tests(tests);
    if (!config_.coverage_cmd.empty()) {
        std::string files;
        for (const auto& t : tests) {
            if (!files.empty()) files += " ";
            files += t.path;
        }
        std::string cmd = util::replace_all(config_.coverage_cmd, "{files}", files);
        cmd = util::replace_all(cmd, "{sandbox}", config_.sandbox_dir);
        run_command(cmd, config_.sandbox_dir);
    }
    fs::path report_file = fs::path(config_.sandbox_dir) / config_.coverage_file;
    if (config_.coverage_file.empty() || !fs::exists(report_file)) return {};
    std::string text = util::read_file(report_file.string());
    return config_.coverage_format == "json" ? parse_line_hit_json(text)
                                             : parse_line_hit_xml(text);
}

}  // namespace testgen::pipeline
