#pragma once

#include <memory>
#include <string>

#include "testgen/model/model.hpp"

namespace testgen::model {

// Parses one source file into a CodeUnit. Throws SyntaxError (with line and
// column) when the text does not parse. The parsers are deliberately
// lightweight: declarations, imports, spans, and call sites, no expression
// semantics.
std::unique_ptr<CodeUnit> parse_unit(const std::string& source_text, Language language,
                                     const std::string& path = "");

// Lexically scans a body snippet for call sites; the same scan the full
// parsers use, so re-parsing a callable's body yields the same multiset.
struct RawCall {
    std::string callee_name;
    std::string receiver_name;
    bool is_constructor = false;
    int arg_count = 0;
    size_t offset = 0;
};

std::vector<RawCall> scan_calls(std::string_view body, Language language);

// Returns true when the text parses under the language grammar.
bool parses(const std::string& source_text, Language language);

}  // namespace testgen::model
