#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "testgen/model/model.hpp"

namespace testgen::analysis {

// User-specified mockable API types: one qualified name or package prefix
// (trailing ".*") per line, '#' starts a comment. Also reused for the
// service-entry base-type list.
class ApiAllowlist {
public:
    ApiAllowlist() = default;

    static ApiAllowlist from_file(const std::string& path);
    static ApiAllowlist from_lines(const std::vector<std::string>& lines);

    void add(std::string entry);
    bool empty() const { return exact_.empty() && prefixes_.empty(); }
    size_t size() const { return exact_.size() + prefixes_.size(); }

    bool matches_name(std::string_view name) const;
    // Array types never match; element mocking is not a thing.
    bool matches(const model::TypeRef& ref) const;

    std::vector<std::string> entries() const;

private:
    std::vector<std::string> exact_;
    std::vector<std::string> prefixes_;  // stored without the trailing ".*"
};

}  // namespace testgen::analysis
