#include "testgen/pipeline/artifact.hpp"

#include <stdexcept>

namespace testgen::pipeline {

const char* to_string(Phase p) {
    switch (p) {
        case Phase::parse: return "parse";
        case Phase::compile: return "compile";
        case Phase::lint: return "lint";
        case Phase::runtime: return "runtime";
        case Phase::assertion: return "assertion";
    }
    return "unknown";
}

const char* to_string(ArtifactStatus s) {
    switch (s) {
        case ArtifactStatus::raw: return "raw";
        case ArtifactStatus::sanitized: return "sanitized";
        case ArtifactStatus::compiling: return "compiling";
        case ArtifactStatus::passing: return "passing";
        case ArtifactStatus::failing: return "failing";
        case ArtifactStatus::discarded: return "discarded";
    }
    return "unknown";
}

TestArtifact::TestArtifact(std::string id, std::string target_id, std::string raw_text)
    : id_(std::move(id)), target_id_(std::move(target_id)), text_(std::move(raw_text)) {
    status_log_.push_back(status_);
}

void TestArtifact::advance(ArtifactStatus next) {
    bool legal = false;
    switch (next) {
        case ArtifactStatus::raw: legal = false; break;
        case ArtifactStatus::sanitized: legal = status_ == ArtifactStatus::raw; break;
        case ArtifactStatus::compiling: legal = status_ == ArtifactStatus::sanitized; break;
        case ArtifactStatus::passing:
        case ArtifactStatus::failing: legal = status_ == ArtifactStatus::compiling; break;
        case ArtifactStatus::discarded: legal = status_ != ArtifactStatus::discarded; break;
    }
    if (!legal)
        throw std::logic_error(std::string("illegal artifact transition ") + to_string(status_) +
                               " -> " + to_string(next));
    status_ = next;
    status_log_.push_back(next);
}

void TestArtifact::discard(Phase phase, const std::string& reason) {
    record(phase, reason, "");
    advance(ArtifactStatus::discarded);
}

void TestArtifact::record(Phase phase, const std::string& diagnostic,
                          const std::string& prompt_hash) {
    history_.push_back({phase, diagnostic, prompt_hash});
}

int TestArtifact::attempts(Phase phase) const {
    auto it = attempt_counts_.find(phase);
    return it == attempt_counts_.end() ? 0 : it->second;
}

}  // namespace testgen::pipeline
