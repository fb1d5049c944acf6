#pragma once

#include <map>
#include <string>
#include <vector>

#include "testgen/pipeline/diagnostic.hpp"

namespace testgen::pipeline {

enum class ArtifactStatus { raw, sanitized, compiling, passing, failing, discarded };

const char* to_string(ArtifactStatus s);

// One generated test file moving through raw -> sanitized -> compiling ->
// passing|failing; discarded is reachable from any state. History and the
// status log are append-only.
class TestArtifact {
public:
    TestArtifact(std::string id, std::string target_id, std::string raw_text);

    const std::string& id() const { return id_; }
    const std::string& target_id() const { return target_id_; }
    const std::string& text() const { return text_; }
    void set_text(std::string text) { text_ = std::move(text); }

    ArtifactStatus status() const { return status_; }
    bool terminal() const {
        return status_ == ArtifactStatus::passing || status_ == ArtifactStatus::failing ||
               status_ == ArtifactStatus::discarded;
    }

    // Throws std::logic_error on a backward or skipping transition.
    void advance(ArtifactStatus next);
    void discard(Phase phase, const std::string& reason);

    struct HistoryEntry {
        Phase phase;
        std::string diagnostic;
        std::string prompt_hash;
    };
    void record(Phase phase, const std::string& diagnostic, const std::string& prompt_hash);
    const std::vector<HistoryEntry>& history() const { return history_; }
    const std::vector<ArtifactStatus>& status_log() const { return status_log_; }

    void count_attempt(Phase phase) { ++attempt_counts_[phase]; }
    int attempts(Phase phase) const;
    const std::map<Phase, int>& attempt_counts() const { return attempt_counts_; }

private:
    std::string id_;
    std::string target_id_;
    std::string text_;
    ArtifactStatus status_ = ArtifactStatus::raw;
    std::vector<HistoryEntry> history_;
    std::vector<ArtifactStatus> status_log_;
    std::map<Phase, int> attempt_counts_;
};

}  // namespace testgen::pipeline
