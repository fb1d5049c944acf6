#include "testgen/llm/gateway.hpp"

#include "testgen/error.hpp"

namespace testgen::llm {

void ScriptedGateway::add_rule(std::string match_substring, std::string reply) {
    std::lock_guard lock(mu_);
    rules_.push_back({std::move(match_substring), std::move(reply), false});
}

Completion ScriptedGateway::complete(const std::string& prompt_text, const SamplingConfig&) {
    std::lock_guard lock(mu_);
    ++calls_;
    for (auto& rule : rules_) {
        if (rule.consumed) continue;
        if (prompt_text.find(rule.match) == std::string::npos) continue;
        rule.consumed = true;
        Completion c;
        c.text = rule.reply;
        return c;
    }
    if (fallback_) {
        Completion c;
        c.text = *fallback_;
        return c;
    }
    throw TransportError("scripted gateway has no reply for prompt (" +
                         std::to_string(prompt_text.size()) + " chars)");
}

int ScriptedGateway::call_count() const {
    std::lock_guard lock(mu_);
    return calls_;
}

int ScriptedGateway::unconsumed_rules() const {
    std::lock_guard lock(mu_);
    int n = 0;
    for (const auto& r : rules_)
        if (!r.consumed) ++n;
    return n;
}

}  // namespace testgen::llm
