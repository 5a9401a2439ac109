#pragma once

// Front door of the tool: the gen -> check -> measure -> sweep-pgo workflow
// over generated benchmarks and user-supplied compiler command templates.
//
// Compiler templates are shell commands with `{in}` (space-separated,
// quoted source files), `{out}` (binary path) and optionally `{flags}`.
// Without `{flags}` the flag set is appended to the command.

#include "lsysgen/astgen.hpp"
#include "lsysgen/codegen.hpp"
#include "lsysgen/oracle.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace lsysgen {

struct GenRequest {
    std::string specName;
    std::string specText;
    unsigned generations = 4;
    OperandPlan plan;
    std::string backend = "c";
    bool splitFiles = false;
    bool debugTrace = false;
    std::size_t maxItems = 100'000'000;
};

struct ManifestFile {
    std::string path;
    std::uint64_t bytes = 0;
    std::string fnv1a64; // hex
    bool operator==(const ManifestFile&) const = default;
};

struct Manifest {
    static constexpr const char* kSchema = "lsysgen-manifest/1";

    GenRequest request;
    std::size_t functionCount = 0;
    std::size_t statementCount = 0;
    std::vector<ManifestFile> files;
    std::vector<std::string> compileInputs;
    std::uint64_t oraclePath = 1;
    std::uint64_t oracleChecksum = 0;
    RunStats oracleStats;
    std::vector<std::string> warnings;

    std::string to_json() const; // pretty-printed, stable key order
    static Manifest from_json(std::string_view text);
    static Manifest load(const std::filesystem::path& file);
};

struct GenResult {
    Manifest manifest;
    Program program;
    std::vector<SourceFile> files;
    bool empty = false; // nothing to emit
};

/// Pure pipeline: parse, derive, lower, verify, run the oracle at PATH=1, emit.
GenResult generate(const GenRequest& request, const BackendRegistry& registry = builtin_backends());

/// generate() plus writing the files and manifest.json into outDir. An
/// empty program writes nothing and carries a warning.
GenResult cmd_gen(const GenRequest& request, const std::filesystem::path& outDir,
                  const BackendRegistry& registry = builtin_backends());

/// Rebuilds the planned program a manifest describes, optionally with another seed.
Program program_from_manifest(const Manifest& manifest, std::optional<std::uint64_t> seed = std::nullopt);

enum class CheckCategory { Pass, CompileFailure, RuntimeFailure, TraceMismatch, ChecksumMismatch };

std::string_view check_category_name(CheckCategory c) noexcept;

struct CheckEntry {
    std::uint64_t seed = 0;
    std::uint64_t path = 0;
    CheckCategory category = CheckCategory::Pass;
    std::optional<std::size_t> divergenceIndex; // first differing trace event
    std::string detail;
};

struct CheckReport {
    std::vector<CheckEntry> entries;
    bool passed() const noexcept;
    std::string to_text() const;
};

struct CheckOptions {
    std::string compilerCmd = "cc -std=c99 -O0 {in} -o {out}";
    std::vector<std::uint64_t> paths{1};
    std::vector<std::uint64_t> seeds; // empty: the manifest's seed
    bool checksumOnly = false;
    std::filesystem::path workDir; // empty: a fresh temporary directory
};

/// Compiles the emitted program and compares its output with the oracle
/// for every (seed, path). The manifest's own seed uses the files on disk
/// in manifestDir; other seeds are regenerated into the work directory.
CheckReport cmd_check(const Manifest& manifest, const std::filesystem::path& manifestDir,
                      const CheckOptions& options, const BackendRegistry& registry = builtin_backends());

/// Substitutes `{in}`, `{out}` and `{flags}` in a compiler command template.
std::string compiler_command(const std::string& templ, const std::vector<std::string>& inputs,
                             const std::filesystem::path& out, const std::string& flags = {});

struct Measurement {
    std::string specName;
    unsigned generation = 0;
    std::string backend;
    std::string compilerCmd;
    std::string flags;
    std::uint64_t path = 0;
    std::uint64_t seed = 0;
    std::string containerKind;
    double compileTimeMs = 0;
    double runTimeMs = 0;
    std::uint64_t binaryBytes = 0;
    std::optional<std::uint64_t> textBytes;
    std::optional<std::uint64_t> checksum;
    std::uint64_t oracleChecksum = 0;
    std::string status = "ok"; // ok | failed | checksum-mismatch
    std::string error;
};

struct MeasureOptions {
    std::string compilerCmd = "cc {flags} {in} -o {out}";
    std::vector<std::string> flagSets{"-O2"};
    int repetitions = 10;
    int warmups = 3;
    std::uint64_t path = 1;
    std::string sizeCmd; // e.g. "size {bin}"; empty: no textBytes
    bool verifyOracle = true;
    std::filesystem::path workDir;
};

/// One row per flag set. Toolchain failures mark the row failed.
std::vector<Measurement> cmd_measure(const Manifest& manifest, const std::filesystem::path& manifestDir,
                                     const MeasureOptions& options);

std::string measurements_csv(const std::vector<Measurement>& rows);
std::string measurements_jsonl(const std::vector<Measurement>& rows);

struct SweepOptions {
    std::string compilerCmd = "cc {flags} {in} -o {out}";
    std::string baseFlags = "-O2";
    std::string generateFlags = "-fprofile-generate";
    std::string useFlags = "-fprofile-use";
    std::string mergeCmd; // run in the profile directory after training, e.g. llvm-profdata
    std::uint64_t trainPath = 1;
    std::vector<int> bitCounts;
    int repetitions = 10;
    int warmups = 3;
    std::filesystem::path workDir;
};

struct SweepRow {
    int bits = 0;
    std::uint64_t path = 0;
    double tMs = 0;  // baseline, no profile
    double tiMs = 0; // profile-trained binary
    double ratio = 0;
};

/// PATH for a sweep bit count i: 2^i - 1.
std::uint64_t sweep_path(int bits);

/// Throws Error when profile tooling is missing or a build fails.
std::vector<SweepRow> cmd_sweep_pgo(const Manifest& manifest, const std::filesystem::path& manifestDir,
                                    const SweepOptions& options);

std::string sweep_csv(const std::vector<SweepRow>& rows);

/// Median of the samples; 0 for none.
double median(std::vector<double> samples);

/// RFC-4180 field quoting.
std::string csv_field(std::string_view value);

std::string fnv1a64_hex(std::string_view bytes);

} // namespace lsysgen
