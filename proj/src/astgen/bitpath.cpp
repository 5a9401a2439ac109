#include "lsysgen/astgen.hpp"

#include <algorithm>

namespace lsysgen {
namespace {

// Counter stack: the top is the counter of the current nesting level; an If
// at that level tests bit (top - 1). Each branch of the If is walked with a
// fresh counter top + 1; at the join the parent becomes the maximum of
// itself and every popped child, so later siblings never reuse a bit that
// was handed out below.
class BitPathAssigner {
public:
    void walk(StmtList& list) {
        for (auto& s : list) {
            if (auto* i = std::get_if<IfStmt>(&s.node)) {
                visit_if(*i);
            } else if (auto* l = std::get_if<LoopStmt>(&s.node)) {
                walk(l->cond);
                walk(l->body);
            }
        }
    }

    int maxRaw() const noexcept { return maxRaw_; }
    int maxBit() const noexcept { return maxBit_; }

private:
    void visit_if(IfStmt& s) {
        walk(s.cond);
        const int parent = stack_.back();
        s.rawBitIndex = parent - 1;
        s.bitIndex = (parent - 1) % 64;
        maxRaw_ = std::max(maxRaw_, s.rawBitIndex);
        maxBit_ = std::max(maxBit_, s.bitIndex);

        int joined = parent;
        joined = std::max(joined, walk_branch(s.then, parent));
        if (s.otherwise) {
            joined = std::max(joined, walk_branch(*s.otherwise, parent));
        }
        stack_.back() = std::max(stack_.back(), joined);
    }

    int walk_branch(StmtList& branch, int parent) {
        stack_.push_back(parent + 1);
        walk(branch);
        const int child = stack_.back();
        stack_.pop_back();
        return child;
    }

    std::vector<int> stack_{1};
    int maxRaw_ = -1;
    int maxBit_ = -1;
};

} // namespace

FunctionDef assign_path_bits(FunctionDef f, std::vector<std::string>* warnings) {
    BitPathAssigner assigner;
    assigner.walk(f.body);
    f.maxBitIndex = assigner.maxBit();
    if (assigner.maxRaw() > 63 && warnings != nullptr) {
        warnings->push_back("function f" + std::to_string(f.id.value) + " needs " +
                            std::to_string(assigner.maxRaw() + 1) + " PATH bits; indices wrap modulo 64");
    }
    return f;
}

} // namespace lsysgen
