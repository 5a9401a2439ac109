#pragma once

// Reference semantics for planned programs. Every backend's emitted code
// must reproduce the trace and checksum computed here.

#include "lsysgen/astgen.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace lsysgen {

struct TraceEvent;
class Heap;

struct ExecConfig {
    std::uint64_t path = 0;
    bool debugTrace = false;
    /// Test instrumentation: after every event, check that the refC sum over
    /// live objects equals the number of live references held by frames.
    bool checkRefcounts = false;
    /// Test instrumentation: called after every event with the heap state.
    std::function<void(const TraceEvent&, const Heap&)> onEvent;
};

/// One behavioral operation. res: new -> 1 fresh / 0 alias; insert -> size
/// after; remove -> 1 removed / 0 absent; contains -> 1 found / 0 not.
struct TraceEvent {
    OpKind op = OpKind::New;
    std::uint64_t var = 0;
    std::int64_t val = 0;
    std::int64_t res = 0;
    bool operator==(const TraceEvent&) const = default;
};

/// `OP kind=<k> var=<u64> val=<i64> res=<i64>` plus LF.
std::string format_trace_line(const TraceEvent& e);

/// Per-event word folded into the checksum.
std::uint64_t event_word(const TraceEvent& e) noexcept;

class Checksum {
public:
    static constexpr std::uint64_t kOffset = 14695981039346656037ULL;
    static constexpr std::uint64_t kPrime = 1099511628211ULL;

    void add(const TraceEvent& e) noexcept { value_ = (value_ * kPrime) ^ event_word(e); }
    std::uint64_t value() const noexcept { return value_; }

private:
    std::uint64_t value_ = kOffset;
};

struct RunStats {
    std::map<OpKind, std::uint64_t> opCounts;
    std::uint64_t maxLive = 0;
    std::int64_t liveAtExit = 0;
    std::uint64_t checksum = Checksum::kOffset;

    std::uint64_t total_ops() const noexcept;
};

struct RunResult {
    std::vector<TraceEvent> trace; // filled only with debugTrace
    RunStats stats;
};

using ObjectId = std::uint64_t;

/// Reference-counted heap of containers. Object ids are allocation
/// ordinals starting at 1. Every misuse throws OracleError.
class Heap {
public:
    explicit Heap(ContainerKind kind) : kind_(kind) {}

    ObjectId allocate();
    void retain(ObjectId id);
    void release(ObjectId id);

    std::int64_t insert(ObjectId id, std::int64_t value);
    bool remove(ObjectId id, std::int64_t value);
    bool contains(ObjectId id, std::int64_t value) const;

    std::int64_t ref_count(ObjectId id) const;
    bool is_live(ObjectId id) const;
    std::uint64_t live() const noexcept { return live_; }
    std::uint64_t max_live() const noexcept { return maxLive_; }
    std::int64_t refcount_sum() const noexcept { return refSum_; }
    /// Recomputes the refC sum by walking every object.
    std::int64_t recount() const noexcept;

    /// Stats snapshot for the heap alone (no ops, checksum untouched).
    RunStats stats() const;

private:
    struct HeapObject {
        std::int64_t refC = 0;
        std::vector<std::int64_t> items;
    };

    HeapObject& live_object(ObjectId id);
    const HeapObject& live_object(ObjectId id) const;

    ContainerKind kind_;
    std::vector<HeapObject> objects_;
    std::uint64_t live_ = 0;
    std::uint64_t maxLive_ = 0;
    std::int64_t refSum_ = 0;
};

RunResult interpret(const Program& program, const ExecConfig& config);

bool verify_no_leaks(const RunStats& stats) noexcept;

} // namespace lsysgen
