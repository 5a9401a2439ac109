#include "lsysgen/astgen.hpp"

#include <stdexcept>

namespace lsysgen {
namespace {

class AvailabilityFinder {
public:
    explicit AvailabilityFinder(const CallStmt* site) : site_(site) {}

    bool walk(const StmtList& list) {
        const std::size_t mark = visible_.size();
        for (const auto& s : list) {
            if (const auto* n = std::get_if<NewStmt>(&s.node)) {
                visible_.push_back(n->slot);
            } else if (const auto* c = std::get_if<CallStmt>(&s.node)) {
                if (c == site_) {
                    return true;
                }
            } else if (const auto* i = std::get_if<IfStmt>(&s.node)) {
                if (walk(i->cond) || walk(i->then) || (i->otherwise && walk(*i->otherwise))) {
                    return true;
                }
            } else if (const auto* l = std::get_if<LoopStmt>(&s.node)) {
                if (walk(l->cond) || walk(l->body)) {
                    return true;
                }
            }
        }
        visible_.resize(mark);
        return false;
    }

    std::vector<SlotId> result() const { return visible_; }

private:
    const CallStmt* site_;
    std::vector<SlotId> visible_;
};

class Planner {
public:
    Planner(const OperandPlan& plan) : plan_(plan), rng_(plan.seed) {}

    void plan_function(FunctionDef& f) {
        nextSlot_ = 0;
        visible_.clear();
        f.body = plan_list(f.body);
        f.numSlots = nextSlot_;
    }

private:
    StmtList plan_list(const StmtList& list) {
        const std::size_t mark = visible_.size();
        StmtList out;
        out.reserve(list.size());
        for (const auto& s : list) {
            std::visit(
                [&](const auto& node) {
                    using T = std::decay_t<decltype(node)>;
                    if constexpr (std::is_same_v<T, NewStmt>) {
                        out.push_back(Stmt{NewStmt{define()}});
                    } else if constexpr (std::is_same_v<T, OpStmt>) {
                        if (visible_.empty()) {
                            out.push_back(Stmt{NewStmt{define()}});
                        }
                        OpStmt op = node;
                        op.slot = visible_[rng_.next() % visible_.size()];
                        op.value = static_cast<std::int64_t>(rng_.next() %
                                                             static_cast<std::uint64_t>(plan_.valueRange));
                        out.push_back(Stmt{op});
                    } else if constexpr (std::is_same_v<T, CallStmt>) {
                        out.push_back(Stmt{CallStmt{node.callee, visible_}});
                    } else if constexpr (std::is_same_v<T, IfStmt>) {
                        IfStmt copy;
                        copy.bitIndex = node.bitIndex;
                        copy.rawBitIndex = node.rawBitIndex;
                        copy.cond = plan_list(node.cond);
                        copy.then = plan_list(node.then);
                        if (node.otherwise) {
                            copy.otherwise = plan_list(*node.otherwise);
                        }
                        out.push_back(Stmt{std::move(copy)});
                    } else if constexpr (std::is_same_v<T, LoopStmt>) {
                        LoopStmt copy;
                        copy.cond = plan_list(node.cond);
                        copy.body = plan_list(node.body);
                        out.push_back(Stmt{std::move(copy)});
                    }
                },
                s.node);
        }
        visible_.resize(mark);
        return out;
    }

    SlotId define() {
        const SlotId slot{nextSlot_++};
        visible_.push_back(slot);
        return slot;
    }

    const OperandPlan& plan_;
    Lcg rng_;
    std::int32_t nextSlot_ = 0;
    std::vector<SlotId> visible_;
};

} // namespace

std::vector<SlotId> available_vars(const FunctionDef& f, const CallStmt* site) {
    AvailabilityFinder finder(site);
    if (!finder.walk(f.body)) {
        return {};
    }
    return finder.result();
}

Program plan_operands(Program program, const OperandPlan& plan) {
    if (plan.valueRange < 1) {
        throw std::invalid_argument("operand value range must be >= 1");
    }
    if (plan.tripCount < 1) {
        throw std::invalid_argument("loop trip count must be >= 1");
    }
    Planner planner(plan);
    for (auto& f : program.functions) {
        planner.plan_function(f);
    }
    program.plan = plan;
    return program;
}

} // namespace lsysgen
