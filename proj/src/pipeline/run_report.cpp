#include "testgen/pipeline/run_report.hpp"

#include <algorithm>
#include <filesystem>

#include <nlohmann/json.hpp>

#include "testgen/error.hpp"
#include "testgen/util/text.hpp"

namespace testgen::pipeline {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

std::string RunReport::to_json_text() const {
    ordered_json j;
    j["run_id"] = run_id;
    j["language"] = language;
    j["model_id"] = model_id;
    j["targets"] = ordered_json::array();
    for (const auto& t : targets) {
        ordered_json jt;
        jt["target_id"] = t.target_id;
        jt["tests"] = ordered_json::array();
        for (const auto& test : t.tests) {
            ordered_json je;
            je["id"] = test.id;
            je["status"] = test.status;
            je["attempts"] = ordered_json::object();
            for (const auto& [phase, count] : test.attempts) je["attempts"][phase] = count;
            je["path"] = test.path;
            jt["tests"].push_back(je);
        }
        jt["line_cov"] = t.line_cov;
        jt["branch_cov"] = t.branch_cov;
        jt["method_cov"] = t.method_cov;
        j["targets"].push_back(jt);
    }
    return j.dump(2) + "\n";
}

RunReport RunReport::from_json_text(const std::string& text) {
    ordered_json j = ordered_json::parse(text);
    RunReport r;
    r.run_id = j.at("run_id").get<std::string>();
    r.language = j.at("language").get<std::string>();
    r.model_id = j.at("model_id").get<std::string>();
    for (const auto& jt : j.at("targets")) {
        TargetReport t;
        t.target_id = jt.at("target_id").get<std::string>();
        for (const auto& je : jt.at("tests")) {
            TestEntry e;
            e.id = je.at("id").get<std::string>();
            e.status = je.at("status").get<std::string>();
            if (je.contains("attempts"))
                for (auto it = je["attempts"].begin(); it != je["attempts"].end(); ++it)
                    e.attempts[it.key()] = it.value().get<int>();
            e.path = je.value("path", "");
            t.tests.push_back(std::move(e));
        }
        t.line_cov = jt.value("line_cov", 0.0);
        t.branch_cov = jt.value("branch_cov", 0.0);
        t.method_cov = jt.value("method_cov", 0.0);
        r.targets.push_back(std::move(t));
    }
    return r;
}

RunReport assemble_report(const std::string& run_id, model::Language language,
                          const std::string& model_id, std::vector<TargetRun>& runs) {
    // Collected single-threaded; target order is fixed by id so worker
    // scheduling cannot leak into the report.
    std::sort(runs.begin(), runs.end(),
              [](const TargetRun& a, const TargetRun& b) { return a.target_id < b.target_id; });
    RunReport report;
    report.run_id = run_id;
    report.language = model::to_string(language);
    report.model_id = model_id;
    std::string ext = language == model::Language::java ? ".java" : ".py";
    for (const auto& run : runs) {
        TargetReport t;
        t.target_id = run.target_id;
        for (const auto& a : run.artifacts) {
            TestEntry e;
            e.id = a.id();
            e.status = to_string(a.status());
            for (const auto& [phase, count] : a.attempt_counts())
                e.attempts[to_string(phase)] = count;
            e.path = safe_id(run.target_id) + "/" + a.id() + ext;
            t.tests.push_back(std::move(e));
        }
        t.line_cov = run.line_cov;
        t.branch_cov = run.branch_cov;
        t.method_cov = run.method_cov;
        report.targets.push_back(std::move(t));
    }
    return report;
}

std::string persist_run(const RunOutput& run, const std::string& out_dir) {
    fs::path run_dir = fs::path(out_dir) / ("run-" + run.report.run_id);
    std::error_code ec;
    fs::remove_all(run_dir, ec);
    fs::create_directories(run_dir, ec);
    if (ec) throw IoError("cannot create run directory: " + run_dir.string());
    if (!fs::is_directory(run_dir)) throw IoError("run directory not writable: " + run_dir.string());

    std::string ext = run.language == model::Language::java ? ".java" : ".py";

    for (const auto& target : run.target_runs) {
        fs::path target_dir = run_dir / safe_id(target.target_id);
        fs::create_directories(target_dir, ec);
        if (ec) throw IoError("cannot create target directory: " + target_dir.string());
        for (const auto& a : target.artifacts) {
            util::write_file((target_dir / (a.id() + ext)).string(), a.text());
        }
        fs::path transcripts = target_dir / "transcripts";
        fs::create_directories(transcripts, ec);
        for (const auto& x : target.exchanges) {
            util::write_file((transcripts / (x.label + ".prompt.txt")).string(), x.prompt);
            util::write_file((transcripts / (x.label + ".completion.txt")).string(), x.completion);
        }
    }

    // Mirrored test-source tree of passing tests.
    for (size_t i = 0; i < run.target_runs.size(); ++i) {
        const auto& target = run.target_runs[i];
        for (const auto& a : target.artifacts) {
            if (a.status() != ArtifactStatus::passing) continue;
            fs::path dest = run_dir / "tests" / (a.id() + ext);
            fs::create_directories(dest.parent_path(), ec);
            util::write_file(dest.string(), a.text());
        }
    }

    fs::path report_path = run_dir / "report.json";
    util::write_file(report_path.string(), run.report.to_json_text());
    return report_path.string();
}

}  // namespace testgen::pipeline
