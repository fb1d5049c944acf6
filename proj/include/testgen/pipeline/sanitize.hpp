#pragma once

#include <string>

#include "testgen/model/model.hpp"

namespace testgen::pipeline {

// Extracts syntactically valid test code from raw model output: fenced code
// blocks first, then the whole text, then the longest parseable line region.
// Java output consisting of bare methods is wrapped in a test class, with
// import lines hoisted above it. Throws UnsalvageableError when no parseable
// test content exists.
std::string sanitize(const std::string& raw_text, model::Language language);

}  // namespace testgen::pipeline
