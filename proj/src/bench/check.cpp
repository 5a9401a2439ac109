#include "lsysgen/bench.hpp"
#include "lsysgen/error.hpp"
#include "lsysgen/subprocess.hpp"

#include <sstream>

namespace lsysgen {
namespace {

void replace_all(std::string& s, std::string_view from, const std::string& to) {
    std::size_t pos = 0;
    while ((pos = s.find(from, pos)) != std::string::npos) {
        s.replace(pos, from.size(), to);
        pos += to.size();
    }
}

std::vector<std::string> split_lines(std::string_view text) {
    std::vector<std::string> lines;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        lines.emplace_back(text.substr(pos, end - pos));
        pos = end + 1;
    }
    return lines;
}

std::string first_line(const std::string& text) {
    const auto nl = text.find('\n');
    return nl == std::string::npos ? text : text.substr(0, nl);
}

CheckEntry compare_run(const ProcessResult& run, const RunResult& oracle, bool checksumOnly) {
    CheckEntry entry;
    if (!run.ok()) {
        entry.category = CheckCategory::RuntimeFailure;
        entry.detail = "exit code " + std::to_string(run.exitCode) + (run.err.empty() ? "" : ": " + first_line(run.err));
        return entry;
    }
    const auto lines = split_lines(run.out);
    const std::string expectedChecksum = "CHECKSUM " + std::to_string(oracle.stats.checksum);
    if (!checksumOnly) {
        for (std::size_t i = 0; i < oracle.trace.size(); ++i) {
            std::string expected = format_trace_line(oracle.trace[i]);
            expected.pop_back();
            if (i >= lines.size() || lines[i] != expected) {
                entry.category = CheckCategory::TraceMismatch;
                entry.divergenceIndex = i;
                entry.detail = "event " + std::to_string(i) + ": expected '" + expected + "', got '" +
                               (i < lines.size() ? lines[i] : std::string("<end of output>")) + "'";
                return entry;
            }
        }
        if (lines.size() != oracle.trace.size() + 1) {
            entry.category = lines.size() > oracle.trace.size() + 1 ? CheckCategory::TraceMismatch
                                                                     : CheckCategory::ChecksumMismatch;
            entry.divergenceIndex = oracle.trace.size();
            entry.detail = "expected " + std::to_string(oracle.trace.size()) + " events then the checksum line, got " +
                           std::to_string(lines.size()) + " lines";
            if (lines.size() > oracle.trace.size() && lines[oracle.trace.size()].rfind("CHECKSUM", 0) != 0) {
                entry.category = CheckCategory::TraceMismatch;
            }
            return entry;
        }
    }
    const std::string actual = lines.empty() ? std::string() : lines.back();
    if (actual != expectedChecksum) {
        entry.category = CheckCategory::ChecksumMismatch;
        entry.detail = "expected '" + expectedChecksum + "', got '" + actual + "'";
    }
    return entry;
}

} // namespace

std::string_view check_category_name(CheckCategory c) noexcept {
    switch (c) {
    case CheckCategory::Pass: return "pass";
    case CheckCategory::CompileFailure: return "compile-failure";
    case CheckCategory::RuntimeFailure: return "runtime-failure";
    case CheckCategory::TraceMismatch: return "trace-mismatch";
    case CheckCategory::ChecksumMismatch: return "checksum-mismatch";
    }
    return "?";
}

bool CheckReport::passed() const noexcept {
    if (entries.empty()) {
        return false;
    }
    for (const auto& e : entries) {
        if (e.category != CheckCategory::Pass) {
            return false;
        }
    }
    return true;
}

std::string CheckReport::to_text() const {
    std::ostringstream out;
    for (const auto& e : entries) {
        out << check_category_name(e.category) << " seed=" << e.seed << " path=" << e.path;
        if (e.divergenceIndex) {
            out << " event=" << *e.divergenceIndex;
        }
        if (!e.detail.empty()) {
            out << " : " << e.detail;
        }
        out << '\n';
    }
    out << (passed() ? "PASS" : "FAIL") << '\n';
    return out.str();
}

std::string compiler_command(const std::string& templ, const std::vector<std::string>& inputs,
                             const std::filesystem::path& out, const std::string& flags) {
    std::string in;
    for (const auto& f : inputs) {
        in += in.empty() ? shell_quote(f) : " " + shell_quote(f);
    }
    std::string cmd = templ;
    if (cmd.find("{flags}") == std::string::npos && !flags.empty()) {
        cmd += " " + flags;
    }
    replace_all(cmd, "{flags}", flags);
    replace_all(cmd, "{in}", in);
    replace_all(cmd, "{out}", shell_quote(out.string()));
    return cmd;
}

CheckReport cmd_check(const Manifest& manifest, const std::filesystem::path& manifestDir,
                      const CheckOptions& options, const BackendRegistry& registry) {
    const WorkDir workDir(options.workDir, "lsysgen-check");
    const auto& work = workDir.path();

    std::vector<std::uint64_t> seeds = options.seeds;
    if (seeds.empty()) {
        seeds.push_back(manifest.request.plan.seed);
    }

    CheckReport report;
    for (const auto seed : seeds) {
        const auto seedDir = work / ("seed-" + std::to_string(seed));
        std::filesystem::create_directories(seedDir);

        std::filesystem::path srcDir = manifestDir;
        std::vector<std::string> inputs = manifest.compileInputs;
        Program program;
        if (seed == manifest.request.plan.seed) {
            program = program_from_manifest(manifest);
        } else {
            GenRequest request = manifest.request;
            request.plan.seed = seed;
            GenResult regenerated = generate(request, registry);
            write_files(regenerated.files, seedDir / "src");
            srcDir = seedDir / "src";
            inputs = regenerated.manifest.compileInputs;
            program = std::move(regenerated.program);
        }

        const auto binary = std::filesystem::absolute(seedDir / "prog");
        const auto build = run_shell(compiler_command(options.compilerCmd, inputs, binary), srcDir);
        if (!build.ok()) {
            CheckEntry entry;
            entry.seed = seed;
            entry.category = CheckCategory::CompileFailure;
            entry.detail = first_line(build.err.empty() ? build.out : build.err);
            report.entries.push_back(std::move(entry));
            continue;
        }

        for (const auto path : options.paths) {
            const RunResult oracle = interpret(program, ExecConfig{path, !options.checksumOnly, false, {}});
            std::vector<std::string> argv{binary.string(), std::to_string(path)};
            if (!options.checksumOnly) {
                argv.emplace_back("--debug");
            }
            CheckEntry entry = compare_run(run_process(argv), oracle, options.checksumOnly);
            entry.seed = seed;
            entry.path = path;
            report.entries.push_back(std::move(entry));
        }
    }
    return report;
}

} // namespace lsysgen
