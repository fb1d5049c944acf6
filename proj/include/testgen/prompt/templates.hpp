#pragma once

#include <map>
#include <string>

namespace testgen::prompt {

// Versioned plain-text prompt templates. Section files wrap slot content via
// the {{content}} placeholder; preambles and guidance are fixed text. The
// builtin set is the shipped v1; a directory can override it file-by-file.
class TemplateSet {
public:
    static const TemplateSet& builtin();
    static TemplateSet load_dir(const std::string& dir);

    const std::string& get(const std::string& name) const;
    bool has(const std::string& name) const { return files_.count(name) > 0; }
    const std::string& version() const { return version_; }

    // Materializes the set as files (one per template plus VERSION).
    void write_dir(const std::string& dir) const;

private:
    std::string version_;
    std::map<std::string, std::string> files_;
};

}  // namespace testgen::prompt
