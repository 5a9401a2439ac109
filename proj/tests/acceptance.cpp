// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Each criterion also enforces its wall-clock budget.

#include "properties.hpp"

#include <chrono>
#include <functional>
#include <iostream>

using namespace lsysgen;
using namespace testsupport;

namespace {

constexpr std::uint64_t kAllOnes = ~std::uint64_t{0};

struct Outcome {
    bool ok = true;
    std::string detail;

    void fail(const std::string& why) {
        if (ok) {
            detail = why;
        }
        ok = false;
    }
};

std::string cs5() { return grammar_text("cs5"); }

// criterion 1
Outcome cs6_count() {
    Outcome o;
    const std::size_t inserts = count_terminals(derive(parse_spec(grammar_text("cs6_init")), 4), OpKind::Insert);
    if (inserts != 1024) {
        o.fail("expected 1024 inserts, got " + std::to_string(inserts));
    }
    o.detail = o.ok ? "1024 inserts at generation 4" : o.detail;
    return o;
}

// criterion 2
Outcome bitpath() {
    Outcome o;
    for (const char* name : {"bitpath_nested_then_sibling.txt", "bitpath_sequential_ifs.txt"}) {
        const BitFixture fx = load_bit_fixture(name);
        const Program p = extract_functions(parse_item_seq(fx.input));
        if (bits_of(assign_path_bits(p.functions[0])) != fx.expect) {
            o.fail(std::string("fixture ") + name + " does not match");
        }
    }
    RandomSeq gen(2024);
    for (int i = 0; i < 200 && o.ok; ++i) {
        const Program p = extract_functions(gen.seq(5, 5));
        for (const auto& f : p.functions) {
            if (auto v = bitpath_violation(assign_path_bits(f).body); !v.empty()) {
                o.fail("random program " + std::to_string(i) + ": " + v);
            }
        }
    }
    if (o.ok) o.detail = "2 fixtures and 200 random programs";
    return o;
}

// criterion 3
Outcome dedup() {
    Outcome o;
    RandomSeq gen(77);
    int withCalls = 0;
    for (int i = 0; i < 200 && o.ok; ++i) {
        const ItemSeq derived = random_call_derivation(gen);
        std::set<std::string> bodies;
        call_bodies(derived, bodies);
        withCalls += bodies.empty() ? 0 : 1;
        if (auto v = dedup_violation(derived); !v.empty()) {
            o.fail("derivation " + std::to_string(i) + ": " + v);
        }
    }
    if (withCalls < 150) {
        o.fail("only " + std::to_string(withCalls) + " of 200 derivations contain CALL");
    }
    if (o.ok) o.detail = std::to_string(withCalls) + " of 200 derivations contain CALL";
    return o;
}

// criterion 4
Outcome leaks() {
    Outcome o;
    std::vector<Program> programs;
    RandomSeq gen(314);
    for (int i = 0; i < 200; ++i) {
        programs.push_back(lower(gen.seq(4, 5), OperandPlan{static_cast<std::uint64_t>(i), 8, 2, ContainerKind::Array}));
    }
    for (unsigned g = 4; g <= 7; ++g) {
        programs.push_back(build(cs5(), g));
    }
    int runs = 0;
    for (const auto& base : programs) {
        for (auto kind : {ContainerKind::Array, ContainerKind::SortedList, ContainerKind::Scalar}) {
            Program p = base;
            p.plan.container = kind;
            for (std::uint64_t path : {std::uint64_t{0}, std::uint64_t{1}, kAllOnes}) {
                try {
                    const RunResult r = interpret(p, ExecConfig{path, false, true, {}});
                    if (r.stats.liveAtExit != 0 || !verify_no_leaks(r.stats)) {
                        o.fail("liveAtExit " + std::to_string(r.stats.liveAtExit));
                    }
                } catch (const std::exception& e) {
                    o.fail(e.what());
                }
                ++runs;
            }
        }
    }
    if (o.ok) o.detail = std::to_string(runs) + " runs, liveAtExit = 0, refcounts conserved";
    return o;
}

struct MatrixCase {
    std::string spec;
    unsigned generation;
    std::uint64_t seed;
    ContainerKind container;
};

std::vector<MatrixCase> matrix() {
    std::vector<MatrixCase> out;
    for (const char* spec : {"cs5", "cs6_style"}) {
        for (unsigned g : {4u, 5u}) {
            for (std::uint64_t seed : {0u, 1u}) {
                for (auto kind : {ContainerKind::Array, ContainerKind::SortedList}) {
                    out.push_back({spec, g, seed, kind});
                }
            }
        }
    }
    return out;
}

const std::uint64_t kMatrixPaths[] = {1, std::uint64_t{1} << 63};

// criterion 5
Outcome trace_equivalence() {
    Outcome o;
    if (!have_c_compiler()) {
        o.fail("no C compiler (cc) on PATH: trace equivalence not checked");
        return o;
    }
    const WorkDir scratchDir({}, "lsysgen-acceptance");
    const auto& root = scratchDir.path();
    int combos = 0;
    int n = 0;
    for (const auto& c : matrix()) {
        const Program p = build(grammar_text(c.spec), c.generation, OperandPlan{c.seed, 1000, 2, c.container});
        EmitConfig cfg;
        const auto files = emit(p, cfg);
        const auto dir = root / ("m" + std::to_string(n++));
        write_files(files, dir);
        for (const char* level : {"-O0", "-O2"}) {
            const auto bin = dir / (std::string("prog") + level);
            const auto cc = run_shell(
                compiler_command("cc -std=c99 {flags} {in} -o {out}", compile_inputs(files, cfg), bin, level), dir);
            if (!cc.ok()) {
                o.fail(c.spec + " gen " + std::to_string(c.generation) + " " + level + ": compile failed: " + cc.err);
                continue;
            }
            for (const auto path : kMatrixPaths) {
                const auto run = run_process({bin.string(), std::to_string(path), "--debug"});
                if (!run.ok() || run.out != oracle_text(p, path)) {
                    o.fail(c.spec + " gen " + std::to_string(c.generation) + " seed " + std::to_string(c.seed) + " " +
                           std::string(container_name(c.container)) + " " + level + " path " + std::to_string(path) +
                           ": trace differs from the oracle");
                }
            }
            ++combos;
        }
    }
    if (combos < 20) {
        o.fail("only " + std::to_string(combos) + " combinations compiled");
    }
    if (o.ok) o.detail = std::to_string(combos * 2) + " runs (" + std::to_string(combos) + " builds at -O0/-O2 x 2 paths)";
    return o;
}

// criterion 6
Outcome container_invariance() {
    Outcome o;
    int n = 0;
    for (const auto& c : matrix()) {
        if (c.container != ContainerKind::Array) {
            continue;
        }
        Program p = build(grammar_text(c.spec), c.generation, OperandPlan{c.seed, 1000, 2, ContainerKind::Array});
        for (const auto path : kMatrixPaths) {
            const auto a = interpret(p, ExecConfig{path, false, false, {}}).stats.checksum;
            p.plan.container = ContainerKind::SortedList;
            const auto s = interpret(p, ExecConfig{path, false, false, {}}).stats.checksum;
            p.plan.container = ContainerKind::Array;
            if (a != s) {
                o.fail(c.spec + " gen " + std::to_string(c.generation) + ": checksums differ");
            }
            ++n;
        }
    }
    if (o.ok) o.detail = std::to_string(n) + " cases identical";
    return o;
}

// criterion 7
Outcome growth() {
    Outcome o;
    std::uint64_t previous = 0;
    std::string totals;
    for (unsigned g = 4; g <= 8; ++g) {
        const std::uint64_t total = interpret(build(cs5(), g), ExecConfig{1, false, false, {}}).stats.total_ops();
        totals += (totals.empty() ? "" : " ") + std::to_string(total);
        if (total <= previous) {
            o.fail("generation " + std::to_string(g) + " does not grow");
        }
        previous = total;
    }
    o.detail = (o.ok ? "op totals " : o.detail + "; op totals ") + totals;
    return o;
}

std::map<std::string, std::string> tree_hashes(const std::filesystem::path& dir) {
    std::map<std::string, std::string> out;
    for (const auto& e : std::filesystem::recursive_directory_iterator(dir)) {
        if (e.is_regular_file()) {
            out[std::filesystem::relative(e.path(), dir).string()] = fnv1a64_hex(read_file(e.path()));
        }
    }
    return out;
}

// criterion 8
Outcome determinism() {
    Outcome o;
    const WorkDir scratchDir({}, "lsysgen-determinism");
    const auto& root = scratchDir.path();
    int n = 0;
    for (const char* backend : {"c", "go"}) {
        for (bool split : {false, true}) {
            GenRequest req;
            req.specName = "cs6_style";
            req.specText = grammar_text("cs6_style");
            req.generations = 5;
            req.backend = backend;
            req.splitFiles = split;
            req.plan.seed = 11;
            const auto a = root / ("a" + std::to_string(n));
            const auto b = root / ("b" + std::to_string(n));
            ++n;
            cmd_gen(req, a);
            cmd_gen(req, b);
            const auto ha = tree_hashes(a);
            if (ha != tree_hashes(b) || ha.count("manifest.json") == 0) {
                o.fail(std::string(backend) + (split ? " split" : " single") + ": trees differ");
            }
        }
    }
    if (o.ok) o.detail = std::to_string(n) + " configurations byte-identical";
    return o;
}

// criterion 9
Outcome harness_schema() {
    Outcome o;
    if (!have_c_compiler()) {
        o.fail("no C compiler (cc) on PATH");
        return o;
    }
    const WorkDir scratchDir({}, "lsysgen-measure");
    const auto& dir = scratchDir.path();
    GenRequest req;
    req.specName = "cs5";
    req.specText = cs5();
    req.generations = 6;
    const GenResult g = cmd_gen(req, dir / "prog");
    MeasureOptions opts;
    opts.flagSets = {"-O0", "-O2"};
    opts.workDir = dir / "work";
    const auto rows = cmd_measure(g.manifest, dir / "prog", opts);
    const std::string csv = measurements_csv(rows);
    std::size_t lines = 0;
    for (std::size_t pos = 0; (pos = csv.find("\r\n", pos)) != std::string::npos; pos += 2) {
        ++lines;
    }
    if (rows.size() != 2 || lines != 3) {
        o.fail("expected 2 rows, got " + std::to_string(rows.size()));
    }
    for (const auto& m : rows) {
        if (m.status != "ok") o.fail(m.flags + ": " + m.status + " " + m.error);
        if (!(m.compileTimeMs > 0 && m.runTimeMs > 0 && m.binaryBytes > 0)) o.fail(m.flags + ": non-positive metric");
        if (m.checksum != std::optional<std::uint64_t>(g.manifest.oracleChecksum)) o.fail(m.flags + ": checksum mismatch");
    }
    if (o.ok) o.detail = "2 rows, compile " + std::to_string(rows[0].compileTimeMs) + "/" +
                         std::to_string(rows[1].compileTimeMs) + " ms";
    return o;
}

// criterion 10
Outcome file_counts() {
    Outcome o;
    std::vector<Program> programs{build(grammar_text("cs6_style"), 5), build(grammar_text("cs6_style"), 6),
                                  build(grammar_text("shared_call"), 1), build(cs5(), 4)};
    RandomSeq gen(99);
    for (int i = 0; i < 10; ++i) {
        programs.push_back(lower(random_call_derivation(gen), OperandPlan{}));
    }
    std::string counts;
    for (const auto& p : programs) {
        const std::size_t f = p.functions.size();
        EmitConfig c;
        c.splitFiles = true;
        EmitConfig go = c;
        go.backend = "go";
        const std::size_t nc = emit(p, c).size();
        const std::size_t ngo = emit(p, go).size();
        if (nc != f + 1 || ngo != f) {
            o.fail("F=" + std::to_string(f) + ": c emitted " + std::to_string(nc) + ", go emitted " + std::to_string(ngo));
        }
        if (counts.size() < 40) counts += " F=" + std::to_string(f);
    }
    if (o.ok) o.detail = std::to_string(programs.size()) + " programs," + counts + " ...";
    return o;
}

struct Criterion {
    int number;
    const char* title;
    double budgetSeconds;
    std::function<Outcome()> run;
};

} // namespace

int main() {
    const Criterion criteria[] = {
        {1, "initialization gadget yields 1024 inserts", 1, cs6_count},
        {2, "BitPath fixtures and properties", 10, bitpath},
        {3, "dedup and acyclicity", 30, dedup},
        {4, "oracle leak-freedom", 60, leaks},
        {5, "trace equivalence of compiled C", 300, trace_equivalence},
        {6, "container invariance", 60, container_invariance},
        {7, "growth monotonicity", 60, growth},
        {8, "gen determinism", 60, determinism},
        {9, "measure schema", 120, harness_schema},
        {10, "split-file counts", 60, file_counts},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.fail(std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (secs > c.budgetSeconds) {
            o.fail("took " + std::to_string(secs) + " s, budget " + std::to_string(c.budgetSeconds) + " s");
        }
        failures += o.ok ? 0 : 1;
        char timing[32];
        std::snprintf(timing, sizeof timing, "%.2fs", secs);
        std::cout << (o.ok ? "PASS" : "FAIL") << " criterion " << c.number << ": " << c.title << " [" << timing
                  << "] " << o.detail << std::endl;
    }
    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
    return failures == 0 ? 0 : 1;
}
