#include "lsysgen/oracle.hpp"

namespace lsysgen {

std::string format_trace_line(const TraceEvent& e) {
    std::string line = "OP kind=";
    line += op_keyword(e.op);
    line += " var=" + std::to_string(e.var);
    line += " val=" + std::to_string(e.val);
    line += " res=" + std::to_string(e.res);
    line += '\n';
    return line;
}

std::uint64_t event_word(const TraceEvent& e) noexcept {
    const auto low16 = [](std::uint64_t v) { return v & 0xFFFFu; };
    return (static_cast<std::uint64_t>(e.op) << 48) | (low16(e.var) << 32) |
           (low16(static_cast<std::uint64_t>(e.val)) << 16) | low16(static_cast<std::uint64_t>(e.res));
}

std::uint64_t RunStats::total_ops() const noexcept {
    std::uint64_t n = 0;
    for (const auto& [op, count] : opCounts) {
        n += count;
    }
    return n;
}

bool verify_no_leaks(const RunStats& stats) noexcept { return stats.liveAtExit == 0; }

} // namespace lsysgen
