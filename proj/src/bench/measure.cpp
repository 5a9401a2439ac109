#include "lsysgen/bench.hpp"
#include "lsysgen/error.hpp"
#include "lsysgen/subprocess.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <set>

namespace lsysgen {
namespace {

std::optional<std::uint64_t> parse_checksum(const std::string& out) {
    auto pos = out.rfind("CHECKSUM ");
    if (pos == std::string::npos) {
        return std::nullopt;
    }
    pos += 9;
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(out.data() + pos, out.data() + out.size(), v);
    if (ec != std::errc() || ptr == out.data() + pos) {
        return std::nullopt;
    }
    return v;
}

// First integer on the last non-empty line, which matches the Berkeley
// `size` layout (text is the first column) as well as plain numeric output.
std::optional<std::uint64_t> parse_size_output(const std::string& out) {
    std::string last;
    std::size_t pos = 0;
    while (pos < out.size()) {
        auto end = out.find('\n', pos);
        if (end == std::string::npos) {
            end = out.size();
        }
        std::string line = out.substr(pos, end - pos);
        if (line.find_first_not_of(" \t\r") != std::string::npos) {
            last = line;
        }
        pos = end + 1;
    }
    const auto digit = std::find_if(last.begin(), last.end(), [](unsigned char c) { return std::isdigit(c); });
    if (digit == last.end()) {
        return std::nullopt;
    }
    std::uint64_t v = 0;
    const char* first = last.data() + (digit - last.begin());
    const auto [ptr, ec] = std::from_chars(first, last.data() + last.size(), v);
    if (ec != std::errc()) {
        return std::nullopt;
    }
    return v;
}

std::string tail_text(const ProcessResult& r) {
    std::string text = r.err.empty() ? r.out : r.err;
    while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) {
        text.pop_back();
    }
    if (!r.started && text.empty()) {
        text = "could not start process";
    }
    if (text.empty()) {
        text = "exit code " + std::to_string(r.exitCode);
    }
    return text;
}

// Median wall time of `binary path`, after discarding warm-up runs.
double time_runs(const std::filesystem::path& binary, std::uint64_t path, int warmups, int repetitions,
                 ProcessResult* lastRun) {
    const std::vector<std::string> argv{binary.string(), std::to_string(path)};
    for (int i = 0; i < warmups; ++i) {
        auto r = run_process(argv);
        if (!r.ok()) {
            *lastRun = std::move(r);
            return -1;
        }
    }
    std::vector<double> samples;
    for (int i = 0; i < std::max(1, repetitions); ++i) {
        auto r = run_process(argv);
        if (!r.ok()) {
            *lastRun = std::move(r);
            return -1;
        }
        samples.push_back(r.elapsedMs);
        *lastRun = std::move(r);
    }
    return median(std::move(samples));
}

std::set<std::filesystem::path> list_files(const std::filesystem::path& dir) {
    std::set<std::filesystem::path> files;
    for (const auto& e : std::filesystem::recursive_directory_iterator(dir)) {
        if (e.is_regular_file()) {
            files.insert(e.path());
        }
    }
    return files;
}

} // namespace

double median(std::vector<double> samples) {
    if (samples.empty()) {
        return 0;
    }
    std::sort(samples.begin(), samples.end());
    const std::size_t n = samples.size();
    return n % 2 == 1 ? samples[n / 2] : (samples[n / 2 - 1] + samples[n / 2]) / 2.0;
}

std::uint64_t sweep_path(int bits) {
    if (bits < 1 || bits > 63) {
        throw std::invalid_argument("sweep bit count must be in [1, 63], got " + std::to_string(bits));
    }
    return (std::uint64_t{1} << bits) - 1;
}

std::vector<Measurement> cmd_measure(const Manifest& manifest, const std::filesystem::path& manifestDir,
                                     const MeasureOptions& options) {
    const WorkDir workDir(options.workDir, "lsysgen-measure");
    const auto& work = workDir.path();

    std::uint64_t oracleChecksum = manifest.oracleChecksum;
    if (options.path != manifest.oraclePath) {
        oracleChecksum = interpret(program_from_manifest(manifest), ExecConfig{options.path, false, false, {}}).stats.checksum;
    }

    std::vector<Measurement> rows;
    for (std::size_t k = 0; k < options.flagSets.size(); ++k) {
        const std::string& flags = options.flagSets[k];
        Measurement m;
        m.specName = manifest.request.specName;
        m.generation = manifest.request.generations;
        m.backend = manifest.request.backend;
        m.compilerCmd = options.compilerCmd;
        m.flags = flags;
        m.path = options.path;
        m.seed = manifest.request.plan.seed;
        m.containerKind = std::string(container_name(manifest.request.plan.container));
        m.oracleChecksum = oracleChecksum;

        const auto binary = std::filesystem::absolute(work / ("prog-" + std::to_string(k)));
        std::filesystem::remove(binary);
        const std::string command = compiler_command(options.compilerCmd, manifest.compileInputs, binary, flags);

        std::vector<double> compileSamples;
        bool failed = false;
        for (int rep = 0; rep < std::max(1, options.repetitions); ++rep) {
            const auto build = run_shell(command, manifestDir);
            if (!build.ok()) {
                m.status = "failed";
                m.error = tail_text(build);
                failed = true;
                break;
            }
            compileSamples.push_back(build.elapsedMs);
        }
        if (!failed && !std::filesystem::exists(binary)) {
            m.status = "failed";
            m.error = "compiler produced no binary at " + binary.string();
            failed = true;
        }
        if (failed) {
            rows.push_back(std::move(m));
            continue;
        }
        m.compileTimeMs = median(std::move(compileSamples));
        m.binaryBytes = std::filesystem::file_size(binary);

        if (!options.sizeCmd.empty()) {
            std::string cmd = options.sizeCmd;
            const auto pos = cmd.find("{bin}");
            if (pos == std::string::npos) {
                cmd += " " + shell_quote(binary.string());
            } else {
                cmd.replace(pos, 5, shell_quote(binary.string()));
            }
            const auto size = run_shell(cmd);
            if (size.ok()) {
                m.textBytes = parse_size_output(size.out);
            }
            if (!m.textBytes) {
                m.status = "failed";
                m.error = "size command failed: " + tail_text(size);
                rows.push_back(std::move(m));
                continue;
            }
        }

        ProcessResult lastRun;
        const double t = time_runs(binary, options.path, options.warmups, options.repetitions, &lastRun);
        if (t < 0) {
            m.status = "failed";
            m.error = "run failed: " + tail_text(lastRun);
            rows.push_back(std::move(m));
            continue;
        }
        m.runTimeMs = t;
        m.checksum = parse_checksum(lastRun.out);
        if (options.verifyOracle && m.checksum != std::optional<std::uint64_t>(oracleChecksum)) {
            m.status = "checksum-mismatch";
            m.error = "program checksum differs from the oracle";
        }
        rows.push_back(std::move(m));
    }
    return rows;
}

std::vector<SweepRow> cmd_sweep_pgo(const Manifest& manifest, const std::filesystem::path& manifestDir,
                                    const SweepOptions& options) {
    if (options.bitCounts.empty()) {
        throw Error("sweep-pgo needs at least one bit count");
    }
    const WorkDir workDir(options.workDir, "lsysgen-sweep");
    const auto& work = workDir.path();
    const auto baseDir = std::filesystem::absolute(work / "base");
    const auto pgoDir = std::filesystem::absolute(work / "pgo");
    std::filesystem::create_directories(baseDir);
    std::filesystem::create_directories(pgoDir);

    auto build = [&](const std::string& flags, const std::filesystem::path& out, const char* what) {
        const auto r = run_shell(compiler_command(options.compilerCmd, manifest.compileInputs, out, flags), manifestDir);
        if (!r.ok() || !std::filesystem::exists(out)) {
            throw Error(std::string("sweep-pgo: ") + what + " build failed: " + tail_text(r));
        }
    };
    const auto join = [](const std::string& a, const std::string& b) {
        return a.empty() ? b : b.empty() ? a : a + " " + b;
    };

    const auto baseline = baseDir / "prog";
    build(options.baseFlags, baseline, "baseline");

    // The instrumented and the optimized binary share one output path so the
    // profile files the compiler derives from it line up between the builds.
    const auto trained = pgoDir / "prog";
    build(join(options.baseFlags, options.generateFlags), trained, "instrumented");
    const auto before = list_files(pgoDir);
    const auto train = run_process({trained.string(), std::to_string(options.trainPath)}, pgoDir);
    if (!train.ok()) {
        throw Error("sweep-pgo: training run failed: " + tail_text(train));
    }
    if (!options.mergeCmd.empty()) {
        const auto merge = run_shell(options.mergeCmd, pgoDir);
        if (!merge.ok()) {
            throw Error("sweep-pgo: profile merge command failed: " + tail_text(merge));
        }
    }
    if (list_files(pgoDir) == before) {
        throw Error("sweep-pgo: the training run wrote no profile data; check that the compiler supports '" +
                    options.generateFlags + "' and that profile tooling is installed");
    }
    std::filesystem::remove(trained);
    build(join(options.baseFlags, options.useFlags), trained, "profile-use");

    std::vector<SweepRow> rows;
    for (const int bits : options.bitCounts) {
        SweepRow row;
        row.bits = bits;
        row.path = sweep_path(bits);
        ProcessResult last;
        row.tMs = time_runs(baseline, row.path, options.warmups, options.repetitions, &last);
        if (row.tMs < 0) {
            throw Error("sweep-pgo: baseline run failed: " + tail_text(last));
        }
        row.tiMs = time_runs(trained, row.path, options.warmups, options.repetitions, &last);
        if (row.tiMs < 0) {
            throw Error("sweep-pgo: trained run failed: " + tail_text(last));
        }
        row.ratio = row.tiMs > 0 ? row.tMs / row.tiMs : 0;
        rows.push_back(row);
    }
    return rows;
}

} // namespace lsysgen
