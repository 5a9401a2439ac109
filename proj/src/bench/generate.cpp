#include "lsysgen/bench.hpp"
#include "lsysgen/error.hpp"

#include <fstream>

namespace lsysgen {
namespace {

Program build_program(const GenRequest& request) {
    const LSystemSpec spec = parse_spec(request.specText);
    const ItemSeq derived = derive(spec, request.generations, DeriveOptions{request.maxItems});
    Program program = lower(derived, request.plan);
    verify_program(program);
    return program;
}

} // namespace

Program program_from_manifest(const Manifest& manifest, std::optional<std::uint64_t> seed) {
    GenRequest request = manifest.request;
    if (seed) {
        request.plan.seed = *seed;
    }
    return build_program(request);
}

GenResult generate(const GenRequest& request, const BackendRegistry& registry) {
    GenResult result;
    result.program = build_program(request);
    const Program& program = result.program;

    Manifest& m = result.manifest;
    m.request = request;
    m.functionCount = program.functions.size();
    for (const auto& f : program.functions) {
        m.statementCount += count_statements(f.body);
    }
    m.warnings = program.warnings;

    if (program.functions.size() == 1 && program.functions[0].body.empty()) {
        result.empty = true;
        m.warnings.push_back("derived program is empty; nothing to emit");
        return result;
    }

    const auto run = interpret(program, ExecConfig{m.oraclePath, false, false, {}});
    m.oracleStats = run.stats;
    m.oracleChecksum = run.stats.checksum;

    EmitConfig emitConfig;
    emitConfig.backend = request.backend;
    emitConfig.splitFiles = request.splitFiles;
    emitConfig.debugTrace = request.debugTrace;
    result.files = emit(program, emitConfig, registry);
    for (const auto& f : result.files) {
        m.files.push_back({f.relativePath, f.contents.size(), fnv1a64_hex(f.contents)});
    }
    m.compileInputs = compile_inputs(result.files, emitConfig, registry);
    return result;
}

GenResult cmd_gen(const GenRequest& request, const std::filesystem::path& outDir, const BackendRegistry& registry) {
    GenResult result = generate(request, registry);
    if (result.empty) {
        return result;
    }
    write_files(result.files, outDir);
    std::ofstream out(outDir / "manifest.json", std::ios::binary | std::ios::trunc);
    out << result.manifest.to_json();
    if (!out) {
        throw Error("cannot write " + (outDir / "manifest.json").string());
    }
    return result;
}

} // namespace lsysgen
