#include "testgen/naturalness/report.hpp"

#include <algorithm>
#include <filesystem>

#include <nlohmann/json.hpp>

#include "testgen/error.hpp"
#include "testgen/model/parser.hpp"
#include "testgen/util/text.hpp"

namespace testgen::naturalness {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

FileReport evaluate_file(const model::CodeUnit& test_file, const model::CodeModel& model) {
    FileReport report;
    report.path = test_file.path;
    report.language = test_file.language;
    report.metrics = assertion_metrics(test_file);

    FocalCandidates candidates = infer_focal_methods(test_file, model);
    std::vector<std::string> identifiers = identifier_pool(test_file, candidates, model);

    for (const model::Callable* test : find_test_methods(test_file)) {
        TestEntry entry;
        entry.name = test->name;
        entry.name_score = test_name_score(test->name, candidates.names, identifiers,
                                           thrown_exception_names(*test));
        entry.variable_scores = variable_name_score(*test, model);
        report.tests.push_back(std::move(entry));
    }
    return report;
}

Aggregates aggregate(const std::vector<const FileReport*>& files) {
    Aggregates agg;
    agg.files = static_cast<int>(files.size());
    if (files.empty()) return agg;
    agg.empty = false;

    double ratio = 0, no_a = 0, dup = 0, null_a = 0, exc = 0;
    double name_sum = 0;
    int name_count = 0;
    double var_sum = 0;
    int var_count = 0;
    for (const FileReport* f : files) {
        ratio += f->metrics.assertion_ratio;
        no_a += f->metrics.pct_no_assertions;
        dup += f->metrics.pct_duplicate_assertions;
        null_a += f->metrics.pct_null_assertions;
        exc += f->metrics.pct_exception_assertions;
        for (const auto& t : f->tests) {
            name_sum += t.name_score.total;
            ++name_count;
            if (t.variable_scores.has_variables) {
                var_sum += t.variable_scores.mean;
                ++var_count;
            }
        }
    }
    agg.tests = name_count;
    agg.mean_assertion_ratio = ratio / agg.files;
    agg.mean_pct_no_assertions = no_a / agg.files;
    agg.mean_pct_duplicate_assertions = dup / agg.files;
    agg.mean_pct_null_assertions = null_a / agg.files;
    agg.mean_pct_exception_assertions = exc / agg.files;
    if (name_count) agg.mean_name_score = name_sum / name_count;
    if (var_count) agg.mean_variable_score = var_sum / var_count;
    if (name_count == 0 && agg.files == 0) agg.empty = true;
    return agg;
}

NaturalnessReport naturalness_report(
    const std::vector<std::pair<std::string, std::string>>& suites,
    const model::CodeModel& project_model) {
    NaturalnessReport report;
    for (const auto& [name, dir] : suites) {
        SuiteReport suite;
        suite.suite = name;
        if (!fs::is_directory(dir)) throw IoError("suite directory not found: " + dir);

        std::vector<std::string> paths;
        for (const auto& entry : fs::recursive_directory_iterator(dir)) {
            if (!entry.is_regular_file()) continue;
            std::string ext = entry.path().extension().string();
            if (ext == ".java" || ext == ".py") paths.push_back(entry.path().string());
        }
        std::sort(paths.begin(), paths.end());

        for (const auto& path : paths) {
            model::Language lang = util::ends_with(path, ".java") ? model::Language::java
                                                                  : model::Language::python;
            std::unique_ptr<model::CodeUnit> unit;
            try {
                unit = model::parse_unit(util::read_file(path), lang, path);
                suite.files.push_back(evaluate_file(*unit, project_model));
            } catch (const SyntaxError&) {
                suite.skipped.push_back(path);
            } catch (const NotATestFileError&) {
                suite.skipped.push_back(path);
            }
        }

        std::vector<const FileReport*> all;
        std::map<std::string, std::vector<const FileReport*>> by_lang;
        for (const auto& f : suite.files) {
            all.push_back(&f);
            by_lang[model::to_string(f.language)].push_back(&f);
        }
        suite.overall = aggregate(all);
        for (const auto& [lang, files] : by_lang) suite.per_language[lang] = aggregate(files);
        report.suites.push_back(std::move(suite));
    }
    return report;
}

namespace {

ordered_json to_json(const Aggregates& a) {
    ordered_json j;
    j["files"] = a.files;
    j["tests"] = a.tests;
    j["mean_assertion_ratio"] = a.mean_assertion_ratio;
    j["mean_pct_no_assertions"] = a.mean_pct_no_assertions;
    j["mean_pct_duplicate_assertions"] = a.mean_pct_duplicate_assertions;
    j["mean_pct_null_assertions"] = a.mean_pct_null_assertions;
    j["mean_pct_exception_assertions"] = a.mean_pct_exception_assertions;
    j["mean_name_score"] = a.mean_name_score;
    j["mean_variable_score"] = a.mean_variable_score;
    j["empty"] = a.empty;
    return j;
}

}  // namespace

std::string NaturalnessReport::to_json_text() const {
    ordered_json j = ordered_json::array();
    for (const auto& suite : suites) {
        ordered_json js;
        js["suite"] = suite.suite;
        js["files"] = ordered_json::array();
        for (const auto& f : suite.files) {
            ordered_json jf;
            jf["path"] = f.path;
            jf["language"] = model::to_string(f.language);
            jf["assertion_metrics"] = {
                {"assertion_ratio", f.metrics.assertion_ratio},
                {"pct_no_assertions", f.metrics.pct_no_assertions},
                {"pct_duplicate_assertions", f.metrics.pct_duplicate_assertions},
                {"pct_null_assertions", f.metrics.pct_null_assertions},
                {"pct_exception_assertions", f.metrics.pct_exception_assertions},
                {"test_count", f.metrics.test_count},
                {"tests_with_assertions", f.metrics.tests_with_assertions},
            };
            jf["tests"] = ordered_json::array();
            for (const auto& t : f.tests) {
                ordered_json jt;
                jt["name"] = t.name;
                jt["name_score"] = {
                    {"focal_match", t.name_score.focal_match},
                    {"token_closeness", t.name_score.token_closeness},
                    {"total", t.name_score.total},
                };
                if (t.variable_scores.has_variables) {
                    jt["var_score"] = t.variable_scores.mean;
                    ordered_json vars = ordered_json::array();
                    for (const auto& v : t.variable_scores.variables) {
                        vars.push_back({{"name", v.name},
                                        {"group", v.data_structure_group ? "data_structure"
                                                                         : "object"},
                                        {"score", v.score}});
                    }
                    jt["variables"] = vars;
                } else {
                    jt["var_score"] = nullptr;
                }
                jf["tests"].push_back(jt);
            }
            js["files"].push_back(jf);
        }
        if (!suite.skipped.empty()) js["skipped"] = suite.skipped;
        js["aggregates"] = to_json(suite.overall);
        ordered_json per_lang = ordered_json::object();
        for (const auto& [lang, agg] : suite.per_language) per_lang[lang] = to_json(agg);
        js["per_language"] = per_lang;
        j.push_back(js);
    }
    return j.dump(2) + "\n";
}

}  // namespace testgen::naturalness
