#pragma once

#include "lsysgen/astgen.hpp"
#include "lsysgen/bench.hpp"
#include "lsysgen/codegen.hpp"
#include "lsysgen/error.hpp"
#include "lsysgen/grammar.hpp"
#include "lsysgen/oracle.hpp"
#include "lsysgen/subprocess.hpp"

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

namespace testsupport {

using namespace lsysgen;

inline std::filesystem::path source_dir() { return LSYSGEN_SOURCE_DIR; }

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::string grammar_text(const std::string& name) {
    return read_file(source_dir() / "grammars" / (name + ".lsys"));
}

inline Program build(const std::string& specText, unsigned generations, OperandPlan plan = {}) {
    const ItemSeq derived = derive(parse_spec(specText), generations);
    Program p = lower(derived, plan);
    verify_program(p);
    return p;
}

inline Program build_seq(const std::string& items, OperandPlan plan = {}) {
    Program p = lower(parse_item_seq(items), plan);
    verify_program(p);
    return p;
}

/// Random pruned L-string. Depth bounds nesting; CALL bodies are never empty.
class RandomSeq {
public:
    explicit RandomSeq(std::uint64_t seed, bool withCalls = true) : rng_(seed), withCalls_(withCalls) {}

    ItemSeq seq(int depth, int maxLen = 4) {
        ItemSeq out;
        const int n = pick(0, maxLen);
        for (int i = 0; i < n; ++i) {
            out.push_back(item(depth));
        }
        return out;
    }

    SymbolItem item(int depth) {
        const int r = pick(0, 9);
        if (depth <= 0 || r < 5) {
            return SymbolItem::terminal(static_cast<OpKind>(pick(1, 4)));
        }
        if (r < 7) {
            std::vector<ItemSeq> blocks{seq(depth - 1), seq(depth - 1)};
            if (pick(0, 1) == 1) {
                blocks.push_back(seq(depth - 1));
            }
            return SymbolItem::construct(ConstructKind::If, std::move(blocks));
        }
        if (r < 9 || !withCalls_) {
            std::vector<ItemSeq> blocks{seq(depth - 1)};
            if (pick(0, 1) == 1) {
                blocks.push_back(seq(depth - 1));
            }
            return SymbolItem::construct(ConstructKind::Loop, std::move(blocks));
        }
        ItemSeq body = seq(depth - 1);
        if (body.empty()) {
            body.push_back(SymbolItem::terminal(OpKind::Insert));
        }
        return SymbolItem::construct(ConstructKind::Call, {std::move(body)});
    }

    /// A random L-system over nonterminals A..C whose rules contain CALL.
    std::string spec_text() {
        const char* names[] = {"A", "B", "C"};
        std::string text;
        for (const char* name : names) {
            text += std::string(name) + " = " + rule_body(2) + "\n";
        }
        return text;
    }

    int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    std::mt19937_64& engine() { return rng_; }

private:
    std::string rule_body(int depth) {
        const char* terms[] = {"new", "insert", "remove", "contains", "A", "B", "C"};
        std::string out;
        const int n = pick(1, 3);
        for (int i = 0; i < n; ++i) {
            if (!out.empty()) {
                out += ' ';
            }
            const int r = pick(0, 9);
            if (depth > 0 && r >= 7) {
                const int k = pick(0, 2);
                if (k == 0) {
                    out += "IF(" + rule_body(depth - 1) + "," + rule_body(depth - 1) + ")";
                } else if (k == 1) {
                    out += "LOOP(" + rule_body(depth - 1) + ")";
                } else {
                    out += "CALL(" + rule_body(depth - 1) + ")";
                }
            } else {
                out += terms[pick(0, 6)];
            }
        }
        if (out.find("CALL(") == std::string::npos) {
            out += " CALL(insert " + std::string(terms[pick(4, 6)]) + ")";
        }
        return out;
    }

    std::mt19937_64 rng_;
    bool withCalls_;
};

/// Per-binary scratch directory, removed when the test process exits.
inline std::filesystem::path scratch(const std::string& name) {
    static const WorkDir root({}, "lsysgen-test");
    return root.path() / name;
}

inline bool have_c_compiler() {
    static const bool ok = run_shell("cc --version").ok();
    return ok;
}

struct CompiledRun {
    bool compiled = false;
    std::string compileLog;
    ProcessResult run;
};

/// Emits `program` as C, compiles every compile input with `ccFlags`, and
/// runs the binary at `path` in debug mode.
inline CompiledRun compile_and_run(const Program& program, const std::filesystem::path& dir, std::uint64_t path,
                                   const std::string& ccFlags = "-std=c99 -O0", bool split = false,
                                   bool debug = true) {
    EmitConfig cfg;
    cfg.splitFiles = split;
    const auto files = emit(program, cfg);
    std::filesystem::remove_all(dir);
    write_files(files, dir);
    CompiledRun out;
    const auto bin = std::filesystem::absolute(dir / "prog");
    const auto cc = run_shell(compiler_command("cc " + ccFlags + " {in} -o {out}", compile_inputs(files, cfg), bin), dir);
    out.compileLog = cc.err + cc.out;
    out.compiled = cc.ok();
    if (out.compiled) {
        std::vector<std::string> argv{bin.string(), std::to_string(path)};
        if (debug) {
            argv.emplace_back("--debug");
        }
        out.run = run_process(argv);
    }
    return out;
}

inline std::string oracle_text(const Program& program, std::uint64_t path) {
    const auto r = interpret(program, ExecConfig{path, true, false, {}});
    std::string text;
    for (const auto& e : r.trace) {
        text += format_trace_line(e);
    }
    text += "CHECKSUM " + std::to_string(r.stats.checksum) + "\n";
    return text;
}

} // namespace testsupport
