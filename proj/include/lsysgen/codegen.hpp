#pragma once

// Source emission through data-driven backends.
//
// A backend is a table of text templates with `${name}` placeholders. A
// placeholder alone on its line is replaced by a (possibly multi-line)
// value indented to the placeholder's column, and the line disappears when
// the value is empty. Elsewhere placeholders are substituted inline.
//
// Lookup of key K for container C tries "K@C" first, then "K".
//
// Required keys: if, else, loop, call, new, insert, remove, contains,
// release, scope, function, unit.main, file.main.
// Optional: unit, file.unit (split output), header, file.header,
// prototype, runtime.

#include "lsysgen/astgen.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace lsysgen {

struct BackendTemplates {
    std::map<std::string, std::string> entries;
};

/// Required keys absent from `templates` (container-qualified variants count).
std::vector<std::string> missing_templates(const BackendTemplates& templates);

class BackendRegistry {
public:
    /// Registry holding the built-in "c" and "go" backends.
    static BackendRegistry with_builtins();

    /// Throws BackendError on a duplicate id or an incomplete template set.
    void register_backend(const std::string& id, BackendTemplates templates);

    const BackendTemplates& get(const std::string& id) const;
    bool contains(const std::string& id) const { return backends_.count(id) != 0; }
    std::vector<std::string> ids() const;

private:
    std::map<std::string, BackendTemplates> backends_;
};

const BackendRegistry& builtin_backends();

BackendTemplates c_backend_templates();
BackendTemplates go_backend_templates();

/// Reads a backend from JSON: an object mapping template keys to strings.
BackendTemplates load_templates_json(const std::filesystem::path& file);

struct EmitConfig {
    std::string backend = "c";
    bool splitFiles = false;
    bool debugTrace = false; // emitted binary starts in trace mode
    std::filesystem::path outputDir;
};

struct SourceFile {
    std::string relativePath;
    std::string contents;
    bool operator==(const SourceFile&) const = default;
};

/// Renders every file of the program. Pure; the container comes from program.plan.
std::vector<SourceFile> emit(const Program& program, const EmitConfig& config,
                             const BackendRegistry& registry = builtin_backends());

/// Files a compiler should receive: everything except the header unit.
std::vector<std::string> compile_inputs(const std::vector<SourceFile>& files, const EmitConfig& config,
                                        const BackendRegistry& registry = builtin_backends());

/// Writes files under config.outputDir, creating directories. Throws Error on I/O failure.
void write_files(const std::vector<SourceFile>& files, const std::filesystem::path& dir);

/// Template expansion used by the emitter; exposed for tests.
std::string expand_template(std::string_view text, const std::map<std::string, std::string>& vars);

} // namespace lsysgen
