#include "lsysgen/bench.hpp"
#include "lsysgen/error.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

using namespace lsysgen;

namespace {

std::string read_file(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) {
        throw Error("cannot read " + file.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_report(const std::string& text, const std::string& out) {
    if (out.empty() || out == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(out, std::ios::binary | std::ios::trunc);
    f << text;
    if (!f) {
        throw Error("cannot write " + out);
    }
}

// Registers every `--templates FILE.json` under the file's stem.
BackendRegistry make_registry(const std::vector<std::string>& templateFiles) {
    BackendRegistry registry = BackendRegistry::with_builtins();
    for (const auto& file : templateFiles) {
        registry.register_backend(std::filesystem::path(file).stem().string(), load_templates_json(file));
    }
    return registry;
}

std::filesystem::path manifest_dir(const std::string& manifestPath) {
    auto dir = std::filesystem::path(manifestPath).parent_path();
    return dir.empty() ? std::filesystem::current_path() : std::filesystem::absolute(dir);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"lsysgen: generate compiler benchmarks from L-system grammars"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "Derive, lower and emit a benchmark program plus manifest.json");
    std::string specFile;
    std::string outDir = "out";
    std::string container = "array";
    std::vector<std::string> genTemplates;
    GenRequest request;
    gen->add_option("spec", specFile, "L-system specification file")->required()->check(CLI::ExistingFile);
    gen->add_option("--generations,-g", request.generations, "Rewrite iterations")->capture_default_str();
    gen->add_option("--seed", request.plan.seed, "Operand planning seed")->capture_default_str();
    gen->add_option("--container", container, "array | sortedlist | scalar")->capture_default_str();
    gen->add_option("--backend", request.backend, "Backend id (c, go, or a --templates stem)")->capture_default_str();
    gen->add_flag("--split-files", request.splitFiles, "One source file per generated function");
    gen->add_option("--trip-count", request.plan.tripCount, "Iterations of every LOOP")->capture_default_str();
    gen->add_option("--value-range", request.plan.valueRange, "Operand values are drawn from [0, N)")
        ->capture_default_str();
    gen->add_option("--max-items", request.maxItems, "Derivation size cap")->capture_default_str();
    gen->add_flag("--debug-default", request.debugTrace, "Emitted binaries trace without --debug");
    gen->add_option("--templates", genTemplates, "Extra backend template JSON file (id = file stem)");
    gen->add_option("--out,-o", outDir, "Output directory")->capture_default_str();

    // check
    auto* check = app.add_subcommand("check", "Compile a generated program and diff it against the oracle");
    std::string checkManifest;
    CheckOptions checkOpts;
    std::vector<std::string> checkTemplates;
    std::string checkWork;
    check->add_option("manifest", checkManifest, "manifest.json written by gen")->required()->check(CLI::ExistingFile);
    check->add_option("--cc", checkOpts.compilerCmd, "Compiler command template with {in} and {out}")
        ->capture_default_str();
    check->add_option("--paths", checkOpts.paths, "PATH values to run")->delimiter(',');
    check->add_option("--seeds", checkOpts.seeds, "Seeds to regenerate and check (default: manifest seed)")
        ->delimiter(',');
    check->add_flag("--checksum-only", checkOpts.checksumOnly, "Compare only the CHECKSUM line");
    check->add_option("--templates", checkTemplates, "Extra backend template JSON file (id = file stem)");
    check->add_option("--work", checkWork, "Working directory for builds");

    // measure
    auto* measure = app.add_subcommand("measure", "Time compilation and execution for each flag set");
    std::string measureManifest;
    MeasureOptions measureOpts;
    std::vector<std::string> flagSets;
    std::string format = "csv";
    std::string measureOut;
    std::string measureWork;
    measure->add_option("manifest", measureManifest, "manifest.json written by gen")
        ->required()
        ->check(CLI::ExistingFile);
    measure->add_option("--cc", measureOpts.compilerCmd, "Compiler command template with {in}, {out}, {flags}")
        ->capture_default_str();
    measure->add_option("--flags", flagSets, "Flag set (repeatable); default -O2")->allow_extra_args(false);
    measure->add_option("--repetitions,-r", measureOpts.repetitions, "Timed runs")->capture_default_str();
    measure->add_option("--warmups,-w", measureOpts.warmups, "Discarded warm-up runs")->capture_default_str();
    measure->add_option("--path", measureOpts.path, "PATH value for the timed runs")->capture_default_str();
    measure->add_option("--size-cmd", measureOpts.sizeCmd, "Size tool command, {bin} is the binary (e.g. 'size {bin}')");
    measure->add_flag("!--no-verify", measureOpts.verifyOracle, "Skip the oracle checksum comparison");
    measure->add_option("--format", format, "csv | jsonl")->check(CLI::IsMember({"csv", "jsonl"}))->capture_default_str();
    measure->add_option("--out,-o", measureOut, "Report file (default stdout)");
    measure->add_option("--work", measureWork, "Working directory for builds");

    // sweep-pgo
    auto* sweep = app.add_subcommand("sweep-pgo", "Train a profile on one PATH and time PATH = 2^i - 1");
    std::string sweepManifest;
    SweepOptions sweepOpts;
    std::string sweepOut;
    std::string sweepWork;
    sweep->add_option("manifest", sweepManifest, "manifest.json written by gen")->required()->check(CLI::ExistingFile);
    sweep->add_option("--cc", sweepOpts.compilerCmd, "Compiler command template")->capture_default_str();
    sweep->add_option("--base-flags", sweepOpts.baseFlags, "Flags for every build")->capture_default_str();
    sweep->add_option("--generate-flags", sweepOpts.generateFlags, "Profile instrumentation flags")
        ->capture_default_str();
    sweep->add_option("--use-flags", sweepOpts.useFlags, "Profile use flags")->capture_default_str();
    sweep->add_option("--merge-cmd", sweepOpts.mergeCmd, "Command run in the profile directory after training");
    sweep->add_option("--train-path", sweepOpts.trainPath, "PATH of the training run")->capture_default_str();
    sweep->add_option("--bits", sweepOpts.bitCounts, "Bit counts i, PATH = 2^i - 1")->delimiter(',')->required();
    sweep->add_option("--repetitions,-r", sweepOpts.repetitions, "Timed runs")->capture_default_str();
    sweep->add_option("--warmups,-w", sweepOpts.warmups, "Discarded warm-up runs")->capture_default_str();
    sweep->add_option("--out,-o", sweepOut, "Report file (default stdout)");
    sweep->add_option("--work", sweepWork, "Working directory for builds");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*gen) {
            const auto kind = parse_container(container);
            if (!kind) {
                throw Error("unknown container '" + container + "' (expected array, sortedlist or scalar)");
            }
            request.plan.container = *kind;
            request.specName = std::filesystem::path(specFile).stem().string();
            request.specText = read_file(specFile);
            const BackendRegistry registry = make_registry(genTemplates);
            const GenResult result = cmd_gen(request, outDir, registry);
            for (const auto& w : result.manifest.warnings) {
                std::cerr << "warning: " << w << '\n';
            }
            if (!result.empty) {
                std::cout << "wrote " << result.files.size() << " file(s) and manifest.json to " << outDir << '\n';
            }
            return 0;
        }
        if (*check) {
            const Manifest manifest = Manifest::load(checkManifest);
            checkOpts.workDir = checkWork;
            const CheckReport report =
                cmd_check(manifest, manifest_dir(checkManifest), checkOpts, make_registry(checkTemplates));
            std::cout << report.to_text();
            return report.passed() ? 0 : 1;
        }
        if (*measure) {
            const Manifest manifest = Manifest::load(measureManifest);
            if (!flagSets.empty()) {
                measureOpts.flagSets = flagSets;
            }
            measureOpts.workDir = measureWork;
            const auto rows = cmd_measure(manifest, manifest_dir(measureManifest), measureOpts);
            write_report(format == "csv" ? measurements_csv(rows) : measurements_jsonl(rows), measureOut);
            for (const auto& r : rows) {
                if (r.status != "ok") {
                    return 1;
                }
            }
            return 0;
        }
        if (*sweep) {
            const Manifest manifest = Manifest::load(sweepManifest);
            sweepOpts.workDir = sweepWork;
            write_report(sweep_csv(cmd_sweep_pgo(manifest, manifest_dir(sweepManifest), sweepOpts)), sweepOut);
            return 0;
        }
    } catch (const ParseError& e) {
        std::cerr << "error: " << specFile << ':' << e.line() << ':' << e.column() << ": " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
