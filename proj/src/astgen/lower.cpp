#include "lsysgen/astgen.hpp"

#include <map>
#include <stdexcept>

namespace lsysgen {

bool IfStmt::operator==(const IfStmt& o) const {
    return bitIndex == o.bitIndex && rawBitIndex == o.rawBitIndex && cond == o.cond && then == o.then &&
           otherwise == o.otherwise;
}

bool LoopStmt::operator==(const LoopStmt& o) const { return cond == o.cond && body == o.body; }

std::string_view container_name(ContainerKind kind) noexcept {
    switch (kind) {
    case ContainerKind::Array: return "array";
    case ContainerKind::SortedList: return "sortedlist";
    case ContainerKind::Scalar: return "scalar";
    }
    return "?";
}

std::optional<ContainerKind> parse_container(std::string_view name) noexcept {
    if (name == "array") return ContainerKind::Array;
    if (name == "sortedlist" || name == "sortedList") return ContainerKind::SortedList;
    if (name == "scalar") return ContainerKind::Scalar;
    return std::nullopt;
}

namespace {

class Extractor {
public:
    Program run(const ItemSeq& top) {
        if (has_nonterminals(top)) {
            throw std::invalid_argument("extract_functions: input still contains nonterminals");
        }
        program_.functions.emplace_back();
        program_.functions[0].id = FunctionId{0};
        program_.functions[0].canonical = canonical_serialize(top);
        program_.entry = FunctionId{0};
        StmtList body = lower_seq(top);
        program_.functions[0].body = std::move(body);
        return std::move(program_);
    }

private:
    StmtList lower_seq(const ItemSeq& seq) {
        StmtList out;
        out.reserve(seq.size());
        for (const auto& item : seq) {
            if (const auto* t = std::get_if<Terminal>(&item.node)) {
                if (t->kind == OpKind::New) {
                    out.push_back(Stmt{NewStmt{}});
                } else {
                    out.push_back(Stmt{OpStmt{t->kind, SlotId{}, 0}});
                }
                continue;
            }
            const auto& c = std::get<Construct>(item.node);
            switch (c.kind) {
            case ConstructKind::If: {
                IfStmt s;
                s.cond = lower_seq(c.blocks.at(0));
                s.then = lower_seq(c.blocks.at(1));
                if (c.blocks.size() == 3) {
                    s.otherwise = lower_seq(c.blocks[2]);
                }
                out.push_back(Stmt{std::move(s)});
                break;
            }
            case ConstructKind::Loop: {
                LoopStmt s;
                if (c.blocks.size() == 2) {
                    s.cond = lower_seq(c.blocks[0]);
                    s.body = lower_seq(c.blocks[1]);
                } else {
                    s.body = lower_seq(c.blocks.at(0));
                }
                out.push_back(Stmt{std::move(s)});
                break;
            }
            case ConstructKind::Call:
                out.push_back(Stmt{CallStmt{function_for(c.blocks.at(0)), {}}});
                break;
            }
        }
        return out;
    }

    FunctionId function_for(const ItemSeq& block) {
        std::string key = canonical_serialize(block);
        if (auto it = table_.find(key); it != table_.end()) {
            return it->second;
        }
        const FunctionId id{static_cast<std::int32_t>(program_.functions.size())};
        table_.emplace(key, id);
        program_.functions.emplace_back();
        program_.functions.back().id = id;
        program_.functions.back().canonical = std::move(key);
        // The vector may reallocate while the body is lowered; assign by index.
        StmtList body = lower_seq(block);
        program_.functions[static_cast<std::size_t>(id.value)].body = std::move(body);
        return id;
    }

    Program program_;
    std::map<std::string, FunctionId, std::less<>> table_;
};

} // namespace

Program extract_functions(const ItemSeq& seq) {
    Program p = Extractor().run(seq);
    // Slots in pre-order so available_vars is meaningful before planning.
    for (auto& f : p.functions) {
        int next = 0;
        auto number = [&](auto&& self, StmtList& list) -> void {
            for (auto& s : list) {
                std::visit(
                    [&](auto& node) {
                        using T = std::decay_t<decltype(node)>;
                        if constexpr (std::is_same_v<T, NewStmt>) {
                            node.slot = SlotId{next++};
                        } else if constexpr (std::is_same_v<T, IfStmt>) {
                            self(self, node.cond);
                            self(self, node.then);
                            if (node.otherwise) self(self, *node.otherwise);
                        } else if constexpr (std::is_same_v<T, LoopStmt>) {
                            self(self, node.cond);
                            self(self, node.body);
                        }
                    },
                    s.node);
            }
        };
        number(number, f.body);
        f.numSlots = next;
    }
    for (auto& f : p.functions) {
        auto annotate = [&](auto&& self, StmtList& list) -> void {
            for (auto& s : list) {
                if (auto* c = std::get_if<CallStmt>(&s.node)) {
                    c->available = available_vars(f, c);
                } else if (auto* i = std::get_if<IfStmt>(&s.node)) {
                    self(self, i->cond);
                    self(self, i->then);
                    if (i->otherwise) self(self, *i->otherwise);
                } else if (auto* l = std::get_if<LoopStmt>(&s.node)) {
                    self(self, l->cond);
                    self(self, l->body);
                }
            }
        };
        annotate(annotate, f.body);
    }
    return p;
}

Program lower(const ItemSeq& derived, const OperandPlan& plan) {
    auto pruned = prune_nonterminals(derived);
    Program p = extract_functions(pruned.seq);
    if (pruned.dropped != 0) {
        p.warnings.push_back("dropped " + std::to_string(pruned.dropped) +
                             " nonterminal(s) left over after derivation");
    }
    for (auto& f : p.functions) {
        f = assign_path_bits(std::move(f), &p.warnings);
    }
    return plan_operands(std::move(p), plan);
}

std::size_t count_statements(const StmtList& body) noexcept {
    std::size_t n = 0;
    for (const auto& s : body) {
        ++n;
        if (const auto* i = std::get_if<IfStmt>(&s.node)) {
            n += count_statements(i->cond) + count_statements(i->then);
            if (i->otherwise) n += count_statements(*i->otherwise);
        } else if (const auto* l = std::get_if<LoopStmt>(&s.node)) {
            n += count_statements(l->cond) + count_statements(l->body);
        }
    }
    return n;
}

} // namespace lsysgen
