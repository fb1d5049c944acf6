#pragma once

#include <map>
#include <memory>
#include <mutex>

#include "testgen/llm/gateway.hpp"

namespace testgen::llm {

// Persists one JSON file per exchange under the session directory, keyed by
// the SHA-256 of the exact rendered prompt.
class RecordingGateway : public ChatGateway {
public:
    RecordingGateway(ChatGateway& inner, std::string session_dir);

    Completion complete(const std::string& prompt_text, const SamplingConfig& cfg) override;

private:
    ChatGateway& inner_;
    std::string session_dir_;
    std::mutex mu_;
};

// Serves recorded completions; throws ReplayMissError on unseen prompts.
class ReplayGateway : public ChatGateway {
public:
    explicit ReplayGateway(std::string session_dir);

    Completion complete(const std::string& prompt_text, const SamplingConfig& cfg) override;

    size_t size() const { return by_hash_.size(); }

private:
    std::map<std::string, std::string> by_hash_;  // prompt sha256 -> completion
};

}  // namespace testgen::llm
