#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "testgen/model/model.hpp"

namespace testgen::pipeline {

struct FileCoverage {
    // line -> hit count; every key is an instrumentable line.
    std::map<int, int> line_hits;
    // line -> (covered branches, total branches)
    std::map<int, std::pair<int, int>> branches;
};

// Neutral schema every coverage tool output is normalized into.
struct CoverageReport {
    std::map<std::string, FileCoverage> files;

    const FileCoverage* find_file(const std::string& path) const;
    // covered / instrumentable; 1.0 when a file has no instrumentable lines.
    double line_coverage(const std::string& path) const;
    double branch_coverage(const std::string& path) const;
    std::vector<int> uncovered_lines(const std::string& path) const;
};

// JaCoCo-style XML: <sourcefile name=..><line nr=.. ci=.. cb=.. mb=../>.
CoverageReport parse_line_hit_xml(const std::string& xml_text);

// Coverage.py-style JSON: files -> {executed_lines, missing_lines, ...}.
CoverageReport parse_line_hit_json(const std::string& json_text);

// Method covered iff at least one instrumented line inside its body span is
// covered. Returns pairs in declaration order for every callable with a body
// in the unit.
std::vector<std::pair<const model::Callable*, bool>> infer_method_coverage(
    const CoverageReport& report, const model::CodeUnit& unit);

double method_coverage_fraction(const CoverageReport& report, const model::CodeUnit& unit);

// Instrumentable lines of a unit: code lines inside callable bodies.
std::vector<int> executable_lines(const model::CodeUnit& unit);

}  // namespace testgen::pipeline
