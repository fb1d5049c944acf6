#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace testgen::llm {

struct SamplingConfig {
    double temperature = 0.2;
    int max_tokens = 1024;
    std::string model_id = "default";
    std::string endpoint;         // chat-completion base URL
    std::string api_key_env;      // environment variable holding the key
    int max_retries = 2;          // transient transport failures only
    int retry_base_ms = 200;      // exponential backoff base
};

struct Completion {
    std::string text;
    std::optional<int> prompt_tokens;
    std::optional<int> completion_tokens;
    long latency_ms = 0;
    int retries = 0;
};

class ChatGateway {
public:
    virtual ~ChatGateway() = default;
    // Returns the model text verbatim; implementations never mutate the prompt.
    virtual Completion complete(const std::string& prompt_text, const SamplingConfig& cfg) = 0;
};

// Deterministic test double: each call returns the first unconsumed rule whose
// substring occurs in the prompt; a fallback reply handles everything else.
class ScriptedGateway : public ChatGateway {
public:
    void add_rule(std::string match_substring, std::string reply);
    void set_fallback(std::string reply) { fallback_ = std::move(reply); }

    Completion complete(const std::string& prompt_text, const SamplingConfig& cfg) override;

    int call_count() const;
    int unconsumed_rules() const;

private:
    struct Rule {
        std::string match;
        std::string reply;
        bool consumed = false;
    };
    mutable std::mutex mu_;
    std::vector<Rule> rules_;
    std::optional<std::string> fallback_;
    int calls_ = 0;
};

}  // namespace testgen::llm
