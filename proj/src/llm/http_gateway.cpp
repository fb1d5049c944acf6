#include "testgen/llm/http_gateway.hpp"

#include <chrono>
#include <cstdlib>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "testgen/error.hpp"
#include "testgen/util/text.hpp"

namespace testgen::llm {

namespace {

using nlohmann::json;

struct ParsedUrl {
    std::string scheme_host_port;  // what httplib::Client takes
    std::string path;
};

ParsedUrl parse_url(const std::string& url) {
    ParsedUrl out;
    auto scheme_end = url.find("://");
    size_t host_start = scheme_end == std::string::npos ? 0 : scheme_end + 3;
    auto path_start = url.find('/', host_start);
    if (path_start == std::string::npos) {
        out.scheme_host_port = url;
        out.path = "/v1/chat/completions";
    } else {
        out.scheme_host_port = url.substr(0, path_start);
        out.path = url.substr(path_start);
    }
    return out;
}

HttpExchange real_transport(const std::string& url, const std::string& body,
                            const std::string& api_key) {
    ParsedUrl parsed = parse_url(url);
    httplib::Client client(parsed.scheme_host_port);
    client.set_connection_timeout(10);
    client.set_read_timeout(120);
    httplib::Headers headers;
    if (!api_key.empty()) headers.emplace("Authorization", "Bearer " + api_key);
    auto res = client.Post(parsed.path, headers, body, "application/json");
    HttpExchange ex;
    if (!res) {
        ex.transport_ok = false;
        ex.error = httplib::to_string(res.error());
        return ex;
    }
    ex.transport_ok = true;
    ex.status = res->status;
    ex.body = res->body;
    return ex;
}

bool looks_like_budget_error(const std::string& body) {
    std::string lower = util::to_lower(body);
    return lower.find("context") != std::string::npos &&
           (lower.find("length") != std::string::npos ||
            lower.find("token") != std::string::npos ||
            lower.find("maximum") != std::string::npos);
}

}  // namespace

HttpChatGateway::HttpChatGateway() : transport_(real_transport) {}

HttpChatGateway::HttpChatGateway(HttpTransport transport) : transport_(std::move(transport)) {}

Completion HttpChatGateway::complete(const std::string& prompt_text, const SamplingConfig& cfg) {
    json request = {
        {"model", cfg.model_id},
        {"messages", json::array({json{{"role", "user"}, {"content", prompt_text}}})},
        {"temperature", cfg.temperature},
        {"max_tokens", cfg.max_tokens},
    };
    std::string body = request.dump();

    std::string api_key;
    if (!cfg.api_key_env.empty()) {
        if (const char* v = std::getenv(cfg.api_key_env.c_str())) api_key = v;
    }

    auto started = std::chrono::steady_clock::now();
    std::string last_error;
    for (int attempt = 0; attempt <= cfg.max_retries; ++attempt) {
        if (attempt > 0 && cfg.retry_base_ms > 0) {
            std::this_thread::sleep_for(
                std::chrono::milliseconds(cfg.retry_base_ms * (1 << (attempt - 1))));
        }
        HttpExchange ex = transport_(cfg.endpoint, body, api_key);
        if (!ex.transport_ok) {
            last_error = ex.error.empty() ? "transport failure" : ex.error;
            continue;
        }
        if (ex.status == 401 || ex.status == 403)
            throw AuthError("authentication rejected (HTTP " + std::to_string(ex.status) + ")");
        if (ex.status == 400 && looks_like_budget_error(ex.body))
            throw BudgetError("prompt exceeds the provider limit: " + ex.body);
        if (ex.status == 408 || ex.status == 429 || ex.status >= 500) {
            last_error = "HTTP " + std::to_string(ex.status);
            continue;
        }
        if (ex.status != 200)
            throw TransportError("unexpected HTTP status " + std::to_string(ex.status) + ": " +
                                 ex.body);

        Completion out;
        out.retries = attempt;
        out.latency_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                             std::chrono::steady_clock::now() - started)
                             .count();
        json parsed = json::parse(ex.body, nullptr, false);
        if (parsed.is_discarded())
            throw TransportError("response body is not valid JSON");
        if (parsed.contains("choices") && !parsed["choices"].empty()) {
            const auto& choice = parsed["choices"][0];
            if (choice.contains("message") && choice["message"].contains("content"))
                out.text = choice["message"]["content"].get<std::string>();
            else if (choice.contains("text"))
                out.text = choice["text"].get<std::string>();
        }
        if (parsed.contains("usage")) {
            const auto& usage = parsed["usage"];
            if (usage.contains("prompt_tokens"))
                out.prompt_tokens = usage["prompt_tokens"].get<int>();
            if (usage.contains("completion_tokens"))
                out.completion_tokens = usage["completion_tokens"].get<int>();
        }
        return out;
    }
    throw TransportError("request failed after " + std::to_string(cfg.max_retries) +
                         " retries: " + last_error);
}

}  // namespace testgen::llm
