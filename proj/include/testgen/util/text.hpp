#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace testgen::util {

// Precomputed line-start offsets for mapping byte offsets to 1-based
// line/column positions and back.
class LineIndex {
public:
    explicit LineIndex(std::string_view text);

    int line_of(size_t offset) const;
    int column_of(size_t offset) const;
    // 1-based line number -> text of that line without the trailing newline.
    std::string_view line_text(int line) const;
    int line_count() const { return static_cast<int>(starts_.size()); }
    // Byte range [begin, end) of the given 1-based line, newline excluded.
    size_t line_begin(int line) const;
    size_t line_end(int line) const;

private:
    std::string_view text_;
    std::vector<size_t> starts_;
};

std::string trim(std::string_view s);
std::string to_lower(std::string_view s);
bool starts_with(std::string_view s, std::string_view prefix);
bool ends_with(std::string_view s, std::string_view suffix);
std::vector<std::string> split(std::string_view s, char sep);
std::vector<std::string> split_lines(std::string_view s);
std::string join(const std::vector<std::string>& parts, std::string_view sep);
std::string replace_all(std::string s, std::string_view from, std::string_view to);

// Splits an identifier on camel-case boundaries and underscores/digits
// transitions: "longArgs" -> {"long", "args"}, "to_minutes" -> {"to", "minutes"}.
// Tokens are lower-cased.
std::vector<std::string> split_identifier(std::string_view name);

// True if the line holds code once comments, blank space, and lone
// braces/brackets are ignored. `line_comment` is the language's marker.
bool is_code_line(std::string_view line, std::string_view line_comment);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

}  // namespace testgen::util
