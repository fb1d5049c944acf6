#include "testgen/cli/config.hpp"

#include <nlohmann/json.hpp>

#include "testgen/error.hpp"
#include "testgen/util/text.hpp"

namespace testgen::cli {

using ordered_json = nlohmann::ordered_json;

std::string RunConfig::to_json_text() const {
    ordered_json j;
    j["project_root"] = project_root;
    j["language"] = language;
    j["targets"] = targets;
    j["model"] = {
        {"model_id", sampling.model_id},   {"endpoint", sampling.endpoint},
        {"temperature", sampling.temperature}, {"max_tokens", sampling.max_tokens},
        {"api_key_env", sampling.api_key_env}, {"max_retries", sampling.max_retries},
        {"retry_base_ms", sampling.retry_base_ms},
    };
    j["analysis"] = {
        {"mock_allowlist", mock_allowlist_path},
        {"service_entry_allowlist", service_entry_allowlist_path},
        {"max_constructor_depth", max_constructor_depth},
    };
    j["budgets"] = {
        {"max_iters", max_iters},
        {"max_rounds", max_rounds},
        {"target_coverage", target_coverage},
    };
    j["adapter"] = {
        {"kind", adapter_kind},     {"compile_cmd", compile_cmd},
        {"run_cmd", run_cmd},       {"coverage_cmd", coverage_cmd},
        {"coverage_file", coverage_file}, {"coverage_format", coverage_format},
    };
    j["output_dir"] = output_dir;
    j["gateway"] = {{"mode", gateway_mode}, {"session_dir", session_dir}};
    j["templates_dir"] = templates_dir;
    j["fewshot_dir"] = fewshot_dir;
    j["token_budget"] = token_budget;
    j["workers"] = workers;
    j["run_id"] = run_id;
    return j.dump(2) + "\n";
}

RunConfig RunConfig::from_json_text(const std::string& text) {
    ordered_json j = ordered_json::parse(text, nullptr, false);
    if (j.is_discarded()) throw ConfigError("config is not valid JSON");
    RunConfig c;
    c.project_root = j.value("project_root", c.project_root);
    c.language = j.value("language", c.language);
    if (j.contains("targets")) c.targets = j["targets"].get<std::vector<std::string>>();
    if (j.contains("model")) {
        const auto& m = j["model"];
        c.sampling.model_id = m.value("model_id", c.sampling.model_id);
        c.sampling.endpoint = m.value("endpoint", c.sampling.endpoint);
        c.sampling.temperature = m.value("temperature", c.sampling.temperature);
        c.sampling.max_tokens = m.value("max_tokens", c.sampling.max_tokens);
        c.sampling.api_key_env = m.value("api_key_env", c.sampling.api_key_env);
        c.sampling.max_retries = m.value("max_retries", c.sampling.max_retries);
        c.sampling.retry_base_ms = m.value("retry_base_ms", c.sampling.retry_base_ms);
    }
    if (j.contains("analysis")) {
        const auto& a = j["analysis"];
        c.mock_allowlist_path = a.value("mock_allowlist", "");
        c.service_entry_allowlist_path = a.value("service_entry_allowlist", "");
        c.max_constructor_depth = a.value("max_constructor_depth", c.max_constructor_depth);
    }
    if (j.contains("budgets")) {
        const auto& b = j["budgets"];
        c.max_iters = b.value("max_iters", c.max_iters);
        c.max_rounds = b.value("max_rounds", c.max_rounds);
        c.target_coverage = b.value("target_coverage", c.target_coverage);
    }
    if (j.contains("adapter")) {
        const auto& a = j["adapter"];
        c.adapter_kind = a.value("kind", c.adapter_kind);
        c.compile_cmd = a.value("compile_cmd", "");
        c.run_cmd = a.value("run_cmd", "");
        c.coverage_cmd = a.value("coverage_cmd", "");
        c.coverage_file = a.value("coverage_file", "");
        c.coverage_format = a.value("coverage_format", c.coverage_format);
    }
    c.output_dir = j.value("output_dir", c.output_dir);
    if (j.contains("gateway")) {
        c.gateway_mode = j["gateway"].value("mode", c.gateway_mode);
        c.session_dir = j["gateway"].value("session_dir", "");
    }
    c.templates_dir = j.value("templates_dir", c.templates_dir);
    c.fewshot_dir = j.value("fewshot_dir", c.fewshot_dir);
    c.token_budget = j.value("token_budget", c.token_budget);
    c.workers = j.value("workers", c.workers);
    c.run_id = j.value("run_id", c.run_id);
    return c;
}

RunConfig RunConfig::load_file(const std::string& path) {
    return from_json_text(util::read_file(path));
}

void RunConfig::validate() const {
    if (language != "java" && language != "python")
        throw ConfigError("language must be 'java' or 'python', got '" + language + "'");
    if (gateway_mode != "live" && gateway_mode != "record" && gateway_mode != "replay")
        throw ConfigError("gateway mode must be live, record, or replay");
    if ((gateway_mode == "replay" || gateway_mode == "record") && session_dir.empty())
        throw ConfigError(gateway_mode + " mode requires a session directory");
    if (max_iters < 0 || max_rounds < 0) throw ConfigError("budgets must be non-negative");
    if (target_coverage <= 0.0 || target_coverage > 1.0)
        throw ConfigError("target_coverage must be in (0, 1]");
    if (workers < 1) throw ConfigError("workers must be at least 1");
    if (adapter_kind != "fake" && adapter_kind != "subprocess")
        throw ConfigError("adapter kind must be 'fake' or 'subprocess'");
    if (sampling.temperature < 0.0 || sampling.temperature > 2.0)
        throw ConfigError("temperature must be in [0, 2]");
    if (sampling.max_tokens <= 0) throw ConfigError("max_tokens must be positive");
}

bool RunConfig::operator==(const RunConfig& other) const {
    return to_json_text() == other.to_json_text();
}

bool glob_match(const std::string& pattern, const std::string& value) {
    // iterative '*' matcher
    size_t p = 0, v = 0, star = std::string::npos, mark = 0;
    while (v < value.size()) {
        if (p < pattern.size() && (pattern[p] == value[v])) {
            ++p;
            ++v;
        } else if (p < pattern.size() && pattern[p] == '*') {
            star = p++;
            mark = v;
        } else if (star != std::string::npos) {
            p = star + 1;
            v = ++mark;
        } else {
            return false;
        }
    }
    while (p < pattern.size() && pattern[p] == '*') ++p;
    return p == pattern.size();
}

}  // namespace testgen::cli
