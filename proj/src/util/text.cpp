#include "testgen/util/text.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "testgen/error.hpp"

namespace testgen::util {

LineIndex::LineIndex(std::string_view text) : text_(text) {
    starts_.push_back(0);
    for (size_t i = 0; i < text.size(); ++i) {
        if (text[i] == '\n') starts_.push_back(i + 1);
    }
}

int LineIndex::line_of(size_t offset) const {
    auto it = std::upper_bound(starts_.begin(), starts_.end(), offset);
    return static_cast<int>(it - starts_.begin());
}

int LineIndex::column_of(size_t offset) const {
    int line = line_of(offset);
    return static_cast<int>(offset - starts_[line - 1]) + 1;
}

std::string_view LineIndex::line_text(int line) const {
    size_t b = line_begin(line);
    size_t e = line_end(line);
    return text_.substr(b, e - b);
}

size_t LineIndex::line_begin(int line) const {
    if (line < 1 || line > line_count()) return text_.size();
    return starts_[line - 1];
}

size_t LineIndex::line_end(int line) const {
    if (line < 1 || line > line_count()) return text_.size();
    size_t end = (line < line_count()) ? starts_[line] : text_.size();
    while (end > starts_[line - 1] && (text_[end - 1] == '\n' || text_[end - 1] == '\r')) --end;
    return end;
}

std::string trim(std::string_view s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

std::string to_lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

bool starts_with(std::string_view s, std::string_view prefix) {
    return s.size() >= prefix.size() && s.substr(0, prefix.size()) == prefix;
}

bool ends_with(std::string_view s, std::string_view suffix) {
    return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    size_t start = 0;
    for (size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == sep) {
            out.emplace_back(s.substr(start, i - start));
            start = i + 1;
        }
    }
    return out;
}

std::vector<std::string> split_lines(std::string_view s) {
    std::vector<std::string> out;
    size_t start = 0;
    for (size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == '\n') {
            size_t end = i;
            if (end > start && s[end - 1] == '\r') --end;
            out.emplace_back(s.substr(start, end - start));
            start = i + 1;
        }
    }
    if (!s.empty() && s.back() == '\n') out.pop_back();
    return out;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
    std::string out;
    for (size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

std::string replace_all(std::string s, std::string_view from, std::string_view to) {
    if (from.empty()) return s;
    size_t pos = 0;
    while ((pos = s.find(from, pos)) != std::string::npos) {
        s.replace(pos, from.size(), to);
        pos += to.size();
    }
    return s;
}

std::vector<std::string> split_identifier(std::string_view name) {
    std::vector<std::string> tokens;
    std::string current;
    auto flush = [&]() {
        if (!current.empty()) {
            tokens.push_back(to_lower(current));
            current.clear();
        }
    };
    for (size_t i = 0; i < name.size(); ++i) {
        char c = name[i];
        if (c == '_' || c == '$' || c == '.') {
            flush();
            continue;
        }
        if (std::isupper(static_cast<unsigned char>(c))) {
            // Boundary before an upper-case letter, except inside an acronym run
            // that continues ("HTTPServer" -> "http", "server").
            bool prev_lower = !current.empty() &&
                              std::islower(static_cast<unsigned char>(current.back()));
            bool next_lower = i + 1 < name.size() &&
                              std::islower(static_cast<unsigned char>(name[i + 1]));
            bool prev_upper = !current.empty() &&
                              std::isupper(static_cast<unsigned char>(current.back()));
            if (prev_lower || (prev_upper && next_lower)) flush();
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            if (!current.empty() && !std::isdigit(static_cast<unsigned char>(current.back())))
                flush();
        } else if (!current.empty() && std::isdigit(static_cast<unsigned char>(current.back()))) {
            flush();
        }
        current += c;
    }
    flush();
    return tokens;
}

bool is_code_line(std::string_view line, std::string_view line_comment) {
    std::string t = trim(line);
    if (t.empty()) return false;
    if (!line_comment.empty() && starts_with(t, line_comment)) return false;
    if (starts_with(t, "/*") || starts_with(t, "*") || starts_with(t, "*/")) return false;
    bool all_punct = std::all_of(t.begin(), t.end(), [](char c) {
        return c == '{' || c == '}' || c == '(' || c == ')' || c == ';' || c == ',' ||
               std::isspace(static_cast<unsigned char>(c));
    });
    return !all_punct;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write file: " + path);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError("write failed: " + path);
}

}  // namespace testgen::util
