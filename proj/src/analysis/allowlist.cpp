#include "testgen/analysis/allowlist.hpp"

#include "testgen/error.hpp"
#include "testgen/util/text.hpp"

namespace testgen::analysis {

namespace {
std::string last_component(std::string_view name) {
    auto pos = name.rfind('.');
    return std::string(pos == std::string_view::npos ? name : name.substr(pos + 1));
}
}  // namespace

ApiAllowlist ApiAllowlist::from_file(const std::string& path) {
    return from_lines(util::split_lines(util::read_file(path)));
}

ApiAllowlist ApiAllowlist::from_lines(const std::vector<std::string>& lines) {
    ApiAllowlist list;
    for (const auto& raw : lines) {
        std::string line = util::trim(raw);
        auto hash = line.find('#');
        if (hash != std::string::npos) line = util::trim(line.substr(0, hash));
        if (line.empty()) continue;
        list.add(line);
    }
    return list;
}

void ApiAllowlist::add(std::string entry) {
    if (util::ends_with(entry, ".*"))
        prefixes_.push_back(entry.substr(0, entry.size() - 2));
    else
        exact_.push_back(std::move(entry));
}

bool ApiAllowlist::matches_name(std::string_view name) const {
    if (name.empty()) return false;
    std::string simple = last_component(name);
    for (const auto& e : exact_) {
        if (e == name) return true;
        // Simple-name entries match qualified uses and vice versa.
        if (last_component(e) == name || e == simple) return true;
    }
    for (const auto& p : prefixes_) {
        if (name.size() > p.size() && util::starts_with(name, p) && name[p.size()] == '.')
            return true;
    }
    return false;
}

bool ApiAllowlist::matches(const model::TypeRef& ref) const {
    if (ref.is_array()) return false;
    if (matches_name(ref.base_name())) return true;
    if (!ref.resolved_name.empty() && matches_name(ref.resolved_name)) return true;
    return false;
}

std::vector<std::string> ApiAllowlist::entries() const {
    std::vector<std::string> out = exact_;
    for (const auto& p : prefixes_) out.push_back(p + ".*");
    return out;
}

}  // namespace testgen::analysis
