#include "testgen/llm/record_replay.hpp"

#include <chrono>
#include <filesystem>

#include <nlohmann/json.hpp>

#include "testgen/error.hpp"
#include "testgen/llm/sha256.hpp"
#include "testgen/util/text.hpp"

namespace testgen::llm {

namespace fs = std::filesystem;
using nlohmann::json;

RecordingGateway::RecordingGateway(ChatGateway& inner, std::string session_dir)
    : inner_(inner), session_dir_(std::move(session_dir)) {
    std::error_code ec;
    fs::create_directories(session_dir_, ec);
    if (ec) throw IoError("cannot create session directory: " + session_dir_);
}

Completion RecordingGateway::complete(const std::string& prompt_text,
                                      const SamplingConfig& cfg) {
    Completion completion = inner_.complete(prompt_text, cfg);
    std::string hash = sha256_hex(prompt_text);

    auto now = std::chrono::system_clock::now();
    auto secs = std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch()).count();

    json record = {
        {"prompt_sha256", hash},
        {"prompt", prompt_text},
        {"completion", completion.text},
        {"model_id", cfg.model_id},
        {"timestamp", secs},
    };
    std::lock_guard lock(mu_);
    util::write_file((fs::path(session_dir_) / (hash + ".json")).string(), record.dump(2) + "\n");
    return completion;
}

ReplayGateway::ReplayGateway(std::string session_dir) {
    if (!fs::is_directory(session_dir))
        throw ConfigError("replay session directory not found: " + session_dir);
    for (const auto& entry : fs::directory_iterator(session_dir)) {
        if (!entry.is_regular_file() || entry.path().extension() != ".json") continue;
        json record = json::parse(util::read_file(entry.path().string()), nullptr, false);
        if (record.is_discarded()) continue;
        if (!record.contains("prompt_sha256") || !record.contains("completion")) continue;
        by_hash_[record["prompt_sha256"].get<std::string>()] =
            record["completion"].get<std::string>();
    }
}

Completion ReplayGateway::complete(const std::string& prompt_text, const SamplingConfig&) {
    std::string hash = sha256_hex(prompt_text);
    auto it = by_hash_.find(hash);
    if (it == by_hash_.end())
        throw ReplayMissError("no recorded completion for prompt hash " + hash);
    Completion c;
    c.text = it->second;
    return c;
}

}  // namespace testgen::llm
