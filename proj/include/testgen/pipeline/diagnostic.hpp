#pragma once

#include <optional>
#include <string>

namespace testgen::pipeline {

enum class Phase { parse, compile, lint, runtime, assertion };

enum class Severity { error, warning, info };

struct Diagnostic {
    Phase phase = Phase::compile;
    std::string message;
    std::string file;
    std::optional<int> line;
    Severity severity = Severity::error;
    // Lint tool category ("error", "warning", "convention", ...); only
    // error-category lint findings drive Python repair.
    std::string category;
};

const char* to_string(Phase p);

}  // namespace testgen::pipeline
