#include "lsysgen/astgen.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace lsysgen {
namespace {

[[noreturn]] void violation(const FunctionDef& f, const std::string& what) {
    throw std::logic_error("f" + std::to_string(f.id.value) + ": " + what);
}

class SlotChecker {
public:
    SlotChecker(const Program& p, const FunctionDef& f) : program_(p), f_(f) {}

    void walk(const StmtList& list) {
        const std::size_t mark = visible_.size();
        for (const auto& s : list) {
            std::visit(
                [&](const auto& node) {
                    using T = std::decay_t<decltype(node)>;
                    if constexpr (std::is_same_v<T, NewStmt>) {
                        if (node.slot.value < 0 || node.slot.value >= f_.numSlots) {
                            violation(f_, "new defines out-of-range slot " + std::to_string(node.slot.value));
                        }
                        if (!defined_.insert(node.slot.value).second) {
                            violation(f_, "slot " + std::to_string(node.slot.value) + " defined twice");
                        }
                        visible_.push_back(node.slot);
                    } else if constexpr (std::is_same_v<T, OpStmt>) {
                        if (std::find(visible_.begin(), visible_.end(), node.slot) == visible_.end()) {
                            violation(f_, "operation uses slot " + std::to_string(node.slot.value) +
                                              " without a dominating new");
                        }
                        if (node.value < 0 || node.value >= program_.plan.valueRange) {
                            violation(f_, "operand value out of range");
                        }
                    } else if constexpr (std::is_same_v<T, CallStmt>) {
                        if (node.available != visible_) {
                            violation(f_, "call passes slots that differ from the dominating set");
                        }
                        if (node.callee.value < 0 ||
                            static_cast<std::size_t>(node.callee.value) >= program_.functions.size()) {
                            violation(f_, "call to unknown function");
                        }
                        const auto& callee = program_.function(node.callee);
                        if (callee.canonical.size() >= f_.canonical.size() ||
                            f_.canonical.find(callee.canonical) == std::string::npos) {
                            violation(f_, "callee f" + std::to_string(callee.id.value) +
                                              " is not generated by a strict substring of its caller");
                        }
                    } else if constexpr (std::is_same_v<T, IfStmt>) {
                        if (node.bitIndex < 0 || node.bitIndex > 63) {
                            violation(f_, "If bit index out of range");
                        }
                        walk(node.cond);
                        walk(node.then);
                        if (node.otherwise) walk(*node.otherwise);
                    } else if constexpr (std::is_same_v<T, LoopStmt>) {
                        walk(node.cond);
                        walk(node.body);
                    }
                },
                s.node);
        }
        visible_.resize(mark);
    }

private:
    const Program& program_;
    const FunctionDef& f_;
    std::vector<SlotId> visible_;
    std::set<std::int32_t> defined_;
};

void collect_callees(const StmtList& list, std::set<std::int32_t>& out) {
    for (const auto& s : list) {
        if (const auto* c = std::get_if<CallStmt>(&s.node)) {
            out.insert(c->callee.value);
        } else if (const auto* i = std::get_if<IfStmt>(&s.node)) {
            collect_callees(i->cond, out);
            collect_callees(i->then, out);
            if (i->otherwise) collect_callees(*i->otherwise, out);
        } else if (const auto* l = std::get_if<LoopStmt>(&s.node)) {
            collect_callees(l->cond, out);
            collect_callees(l->body, out);
        }
    }
}

} // namespace

void verify_program(const Program& program) {
    if (program.functions.empty()) {
        throw std::logic_error("program has no functions");
    }
    if (program.entry.value < 0 || static_cast<std::size_t>(program.entry.value) >= program.functions.size()) {
        throw std::logic_error("entry function does not exist");
    }
    std::set<std::string_view> canon;
    for (std::size_t i = 0; i < program.functions.size(); ++i) {
        const auto& f = program.functions[i];
        if (f.id.value != static_cast<std::int32_t>(i)) {
            throw std::logic_error("function ids are not dense");
        }
        if (!canon.insert(f.canonical).second) {
            violation(f, "duplicate canonical string");
        }
        SlotChecker(program, f).walk(f.body);
    }

    // Cycle check independent of the length argument.
    enum class Mark { White, Grey, Black };
    std::vector<Mark> marks(program.functions.size(), Mark::White);
    std::vector<std::set<std::int32_t>> edges(program.functions.size());
    for (const auto& f : program.functions) {
        collect_callees(f.body, edges[static_cast<std::size_t>(f.id.value)]);
    }
    auto dfs = [&](auto&& self, std::int32_t v) -> void {
        marks[static_cast<std::size_t>(v)] = Mark::Grey;
        for (auto w : edges[static_cast<std::size_t>(v)]) {
            if (marks[static_cast<std::size_t>(w)] == Mark::Grey) {
                throw std::logic_error("call graph has a cycle through f" + std::to_string(w));
            }
            if (marks[static_cast<std::size_t>(w)] == Mark::White) {
                self(self, w);
            }
        }
        marks[static_cast<std::size_t>(v)] = Mark::Black;
    };
    for (std::size_t v = 0; v < program.functions.size(); ++v) {
        if (marks[v] == Mark::White) {
            dfs(dfs, static_cast<std::int32_t>(v));
        }
    }
}

} // namespace lsysgen
