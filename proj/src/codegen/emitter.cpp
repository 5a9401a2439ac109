#include "lsysgen/codegen.hpp"
#include "lsysgen/error.hpp"

#include <fstream>

namespace lsysgen {
namespace {

using Vars = std::map<std::string, std::string>;

std::string lookup_var(const Vars& vars, std::string_view name) {
    auto it = vars.find(std::string(name));
    if (it == vars.end()) {
        throw BackendError("template uses unknown placeholder ${" + std::string(name) + "}");
    }
    return it->second;
}

void expand_inline(std::string_view line, const Vars& vars, std::string& out) {
    std::size_t pos = 0;
    while (pos < line.size()) {
        const std::size_t open = line.find("${", pos);
        if (open == std::string_view::npos) {
            out.append(line.substr(pos));
            return;
        }
        const std::size_t close = line.find('}', open + 2);
        if (close == std::string_view::npos) {
            throw BackendError("unterminated placeholder in template");
        }
        out.append(line.substr(pos, open - pos));
        out += lookup_var(vars, line.substr(open + 2, close - open - 2));
        pos = close + 1;
    }
}

/// If the line is only whitespace plus one placeholder, returns the
/// indentation length and the placeholder name.
std::optional<std::pair<std::size_t, std::string_view>> lone_placeholder(std::string_view line) {
    std::size_t indent = 0;
    while (indent < line.size() && (line[indent] == ' ' || line[indent] == '\t')) ++indent;
    std::string_view rest = line.substr(indent);
    while (!rest.empty() && (rest.back() == ' ' || rest.back() == '\t')) rest.remove_suffix(1);
    if (rest.size() < 3 || rest.substr(0, 2) != "${" || rest.back() != '}') {
        return std::nullopt;
    }
    const std::string_view name = rest.substr(2, rest.size() - 3);
    if (name.find_first_of("${}") != std::string_view::npos) {
        return std::nullopt;
    }
    return std::pair{indent, name};
}

class Emitter {
public:
    Emitter(const Program& program, const EmitConfig& config, const BackendTemplates& templates)
        : program_(program), config_(config), templates_(templates),
          container_(container_name(program.plan.container)) {}

    std::vector<SourceFile> run() {
        std::vector<SourceFile> files;
        const bool hasHeader = has("header");
        if (hasHeader) {
            files.push_back({expand(get("file.header"), {}), render_header()});
        }

        Vars mainVars = unit_vars();
        if (config_.splitFiles) {
            if (!has("unit") || !has("file.unit")) {
                throw BackendError("backend '" + config_.backend + "' does not support split files");
            }
            mainVars["functions"] = render_function(program_.function(program_.entry));
            files.push_back({expand(get("file.main"), {}), expand(get("unit.main"), mainVars)});
            for (const auto& f : program_.functions) {
                if (f.id == program_.entry) {
                    continue;
                }
                Vars v = unit_vars();
                v["functions"] = render_function(f);
                const Vars nameVars{{"id", std::to_string(f.id.value)}, {"name", function_name(f.id)}};
                files.push_back({expand(get("file.unit"), nameVars), expand(get("unit"), v)});
            }
        } else {
            std::string all;
            for (const auto& f : program_.functions) {
                if (!all.empty()) {
                    all += '\n';
                }
                all += render_function(f);
            }
            mainVars["functions"] = all;
            files.push_back({expand(get("file.main"), {}), expand(get("unit.main"), mainVars)});
        }
        return files;
    }

private:
    std::string runtime() const {
        if (!has("runtime")) {
            return {};
        }
        return expand(get("runtime"), {{"debug_default", config_.debugTrace ? "1" : "0"},
                                       {"debug_default_bool", config_.debugTrace ? "true" : "false"},
                                       {"container", std::string(container_)}});
    }

    Vars unit_vars() const {
        return {
            {"runtime", runtime()},
            {"prototypes", prototypes()},
            {"entry", function_name(program_.entry)},
            {"debug_default", config_.debugTrace ? "1" : "0"},
            {"debug_default_bool", config_.debugTrace ? "true" : "false"},
            {"container", std::string(container_)},
            {"functions", ""},
        };
    }

    std::string render_header() const {
        return expand(get("header"), {{"runtime", runtime()},
                                      {"prototypes", prototypes()},
                                      {"container", std::string(container_)}});
    }

    std::string prototypes() const {
        if (!has("prototype")) {
            return {};
        }
        std::string out;
        for (const auto& f : program_.functions) {
            out += expand(get("prototype"), {{"name", function_name(f.id)}, {"id", std::to_string(f.id.value)}});
        }
        return out;
    }

    std::string render_function(const FunctionDef& f) {
        loopDepth_ = 0;
        return expand(get("function"), {{"name", function_name(f.id)},
                                        {"id", std::to_string(f.id.value)},
                                        {"slots", std::to_string(f.numSlots)},
                                        {"body", render_list(f.body)}});
    }

    std::string render_list(const StmtList& list) {
        std::string out;
        std::vector<SlotId> defined;
        for (const auto& s : list) {
            if (const auto* n = std::get_if<NewStmt>(&s.node)) {
                defined.push_back(n->slot);
            }
            out += render_stmt(s);
        }
        for (auto it = defined.rbegin(); it != defined.rend(); ++it) {
            out += expand(get("release"), slot_vars(*it));
        }
        return out;
    }

    std::string scope(const StmtList& list) {
        if (list.empty()) {
            return {};
        }
        return expand(get("scope"), {{"body", render_list(list)}});
    }

    std::string render_stmt(const Stmt& s) {
        if (const auto* n = std::get_if<NewStmt>(&s.node)) {
            return expand(get("new"), slot_vars(n->slot));
        }
        if (const auto* op = std::get_if<OpStmt>(&s.node)) {
            Vars v = slot_vars(op->slot);
            v["value"] = std::to_string(op->value);
            return expand(get(std::string(op_keyword(op->kind))), v);
        }
        if (const auto* c = std::get_if<CallStmt>(&s.node)) {
            std::string args;
            for (const auto slot : c->available) {
                args += args.empty() ? var_name(slot) : ", " + var_name(slot);
            }
            const auto argc = c->available.size();
            return expand(get("call"), {{"callee", function_name(c->callee)},
                                        {"argc", std::to_string(argc)},
                                        {"argcap", std::to_string(argc == 0 ? 1 : argc)},
                                        {"args", args},
                                        {"args_init", args.empty() ? "0" : args},
                                        {"depth", std::to_string(loopDepth_)}});
        }
        if (const auto* i = std::get_if<IfStmt>(&s.node)) {
            std::string elsePart;
            if (i->otherwise) {
                elsePart = expand(get("else"), {{"body", render_list(*i->otherwise)}});
                // The else text is spliced inline after the closing brace.
                if (!elsePart.empty() && elsePart.back() == '\n') {
                    elsePart.pop_back();
                }
            }
            return expand(get("if"), {{"bit", std::to_string(i->bitIndex)},
                                      {"cond", scope(i->cond)},
                                      {"then", render_list(i->then)},
                                      {"else", elsePart}});
        }
        const auto& l = std::get<LoopStmt>(s.node);
        const int depth = loopDepth_++;
        Vars v{{"depth", std::to_string(depth)},
               {"trip", std::to_string(program_.plan.tripCount)},
               {"cond", scope(l.cond)},
               {"body", render_list(l.body)}};
        --loopDepth_;
        return expand(get("loop"), v);
    }

    static std::string var_name(SlotId slot) { return "v" + std::to_string(slot.value); }
    static std::string function_name(FunctionId id) { return "f" + std::to_string(id.value); }

    static Vars slot_vars(SlotId slot) {
        return {{"var", var_name(slot)},
                {"slot", std::to_string(slot.value)},
                {"ordinal", std::to_string(slot.value + 1)}};
    }

    bool has(const std::string& key) const {
        return templates_.entries.count(key + "@" + std::string(container_)) != 0 ||
               templates_.entries.count(key) != 0;
    }

    const std::string& get(const std::string& key) const {
        if (auto it = templates_.entries.find(key + "@" + std::string(container_)); it != templates_.entries.end()) {
            return it->second;
        }
        if (auto it = templates_.entries.find(key); it != templates_.entries.end()) {
            return it->second;
        }
        throw BackendError("backend '" + config_.backend + "' has no template '" + key + "' for container " +
                           std::string(container_));
    }

    static std::string expand(std::string_view text, const Vars& vars) { return expand_template(text, vars); }

    const Program& program_;
    const EmitConfig& config_;
    const BackendTemplates& templates_;
    std::string_view container_;
    int loopDepth_ = 0;
};

} // namespace

std::string expand_template(std::string_view text, const Vars& vars) {
    std::string out;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        const bool terminated = end != std::string_view::npos;
        if (!terminated) {
            end = text.size();
        }
        const std::string_view line = text.substr(pos, end - pos);
        pos = terminated ? end + 1 : end;

        if (auto lone = lone_placeholder(line)) {
            const std::string value = lookup_var(vars, lone->second);
            if (value.empty()) {
                continue;
            }
            const std::string_view indent = line.substr(0, lone->first);
            std::size_t vp = 0;
            while (vp < value.size()) {
                std::size_t ve = value.find('\n', vp);
                if (ve == std::string::npos) {
                    ve = value.size();
                }
                const std::string_view vline = std::string_view(value).substr(vp, ve - vp);
                if (!vline.empty()) {
                    out.append(indent);
                    out.append(vline);
                }
                out += '\n';
                vp = ve + 1;
            }
            continue;
        }
        expand_inline(line, vars, out);
        if (terminated) {
            out += '\n';
        }
    }
    return out;
}

std::vector<SourceFile> emit(const Program& program, const EmitConfig& config, const BackendRegistry& registry) {
    return Emitter(program, config, registry.get(config.backend)).run();
}

std::vector<std::string> compile_inputs(const std::vector<SourceFile>& files, const EmitConfig& config,
                                        const BackendRegistry& registry) {
    const auto& t = registry.get(config.backend);
    std::string header;
    if (auto it = t.entries.find("file.header"); it != t.entries.end() && t.entries.count("header") != 0) {
        header = expand_template(it->second, {});
    }
    std::vector<std::string> out;
    for (const auto& f : files) {
        if (f.relativePath != header) {
            out.push_back(f.relativePath);
        }
    }
    return out;
}

void write_files(const std::vector<SourceFile>& files, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw Error("cannot create output directory " + dir.string() + ": " + ec.message());
    }
    for (const auto& f : files) {
        const auto target = dir / f.relativePath;
        if (target.has_parent_path()) {
            std::filesystem::create_directories(target.parent_path(), ec);
        }
        std::ofstream out(target, std::ios::binary | std::ios::trunc);
        out.write(f.contents.data(), static_cast<std::streamsize>(f.contents.size()));
        if (!out) {
            throw Error("cannot write " + target.string());
        }
    }
}

} // namespace lsysgen
