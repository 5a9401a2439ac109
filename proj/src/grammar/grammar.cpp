#include "lsysgen/grammar.hpp"

#include "lsysgen/error.hpp"

#include <stdexcept>
#include <unordered_map>

namespace lsysgen {

bool Construct::operator==(const Construct& other) const {
    return kind == other.kind && blocks == other.blocks;
}

std::string_view op_keyword(OpKind kind) noexcept {
    switch (kind) {
    case OpKind::New: return "new";
    case OpKind::Insert: return "insert";
    case OpKind::Remove: return "remove";
    case OpKind::Contains: return "contains";
    }
    return "?";
}

std::string_view construct_keyword(ConstructKind kind) noexcept {
    switch (kind) {
    case ConstructKind::If: return "IF";
    case ConstructKind::Loop: return "LOOP";
    case ConstructKind::Call: return "CALL";
    }
    return "?";
}

std::pair<std::size_t, std::size_t> construct_arity(ConstructKind kind) noexcept {
    switch (kind) {
    case ConstructKind::If: return {2, 3};
    case ConstructKind::Loop: return {1, 2};
    case ConstructKind::Call: return {1, 1};
    }
    return {0, 0};
}

bool is_reserved_word(std::string_view word) noexcept {
    return word == "IF" || word == "LOOP" || word == "CALL" || word == "new" || word == "insert" ||
           word == "remove" || word == "contains";
}

const ItemSeq* LSystemSpec::find(std::string_view name) const noexcept {
    for (const auto& p : productions) {
        if (p.lhs == name) {
            return &p.rhs;
        }
    }
    return nullptr;
}

namespace {

void render_into(const ItemSeq& seq, std::string& out, bool allowNonTerminals) {
    bool first = true;
    for (const auto& item : seq) {
        if (!first) {
            out += ' ';
        }
        first = false;
        if (const auto* t = std::get_if<Terminal>(&item.node)) {
            out += op_keyword(t->kind);
        } else if (const auto* n = std::get_if<NonTerminal>(&item.node)) {
            if (!allowNonTerminals) {
                throw std::invalid_argument("canonical_serialize: nonterminal '" + n->name + "' in sequence");
            }
            out += n->name;
        } else {
            const auto& c = std::get<Construct>(item.node);
            out += construct_keyword(c.kind);
            out += '(';
            for (std::size_t i = 0; i < c.blocks.size(); ++i) {
                if (i != 0) {
                    out += ',';
                }
                render_into(c.blocks[i], out, allowNonTerminals);
            }
            out += ')';
        }
    }
}

using RuleTable = std::unordered_map<std::string_view, const ItemSeq*>;

class Rewriter {
public:
    Rewriter(const LSystemSpec& spec, std::size_t budget) : budget_(budget) {
        for (const auto& p : spec.productions) {
            rules_.emplace(p.lhs, &p.rhs);
        }
    }

    ItemSeq rewrite(const ItemSeq& seq) {
        ItemSeq out;
        out.reserve(seq.size());
        for (const auto& item : seq) {
            if (const auto* n = std::get_if<NonTerminal>(&item.node)) {
                auto it = rules_.find(n->name);
                if (it == rules_.end()) {
                    charge(1);
                    out.push_back(item);
                } else {
                    charge(count_items(*it->second));
                    out.insert(out.end(), it->second->begin(), it->second->end());
                }
            } else if (const auto* c = std::get_if<Construct>(&item.node)) {
                charge(1);
                Construct copy{c->kind, {}};
                copy.blocks.reserve(c->blocks.size());
                for (const auto& block : c->blocks) {
                    copy.blocks.push_back(rewrite(block));
                }
                out.push_back(SymbolItem{std::move(copy)});
            } else {
                charge(1);
                out.push_back(item);
            }
        }
        return out;
    }

private:
    void charge(std::size_t n) {
        produced_ += n;
        if (produced_ > budget_) {
            throw ResourceLimitError("derived L-string exceeds the item cap of " + std::to_string(budget_) +
                                     " items");
        }
    }

    RuleTable rules_;
    std::size_t budget_;
    std::size_t produced_ = 0;
};

} // namespace

std::string render(const ItemSeq& seq) {
    std::string out;
    render_into(seq, out, true);
    return out;
}

std::string canonical_serialize(const ItemSeq& seq) {
    std::string out;
    render_into(seq, out, false);
    return out;
}

std::string render_spec(const LSystemSpec& spec) {
    std::string out = "AXIOM = " + render(spec.axiom) + "\n";
    for (const auto& p : spec.productions) {
        out += p.lhs + " = " + render(p.rhs) + "\n";
    }
    return out;
}

ItemSeq rewrite_once(const LSystemSpec& spec, const ItemSeq& seq) {
    return Rewriter(spec, static_cast<std::size_t>(-1)).rewrite(seq);
}

ItemSeq derive(const LSystemSpec& spec, unsigned generations, const DeriveOptions& options) {
    ItemSeq current = spec.axiom;
    if (count_items(current) > options.maxItems) {
        throw ResourceLimitError("axiom exceeds the item cap of " + std::to_string(options.maxItems) + " items");
    }
    for (unsigned g = 0; g < generations; ++g) {
        current = Rewriter(spec, options.maxItems).rewrite(current);
    }
    return current;
}

PruneResult prune_nonterminals(const ItemSeq& seq) {
    PruneResult result;
    result.seq.reserve(seq.size());
    for (const auto& item : seq) {
        if (std::holds_alternative<NonTerminal>(item.node)) {
            ++result.dropped;
        } else if (const auto* c = std::get_if<Construct>(&item.node)) {
            Construct copy{c->kind, {}};
            for (const auto& block : c->blocks) {
                auto inner = prune_nonterminals(block);
                result.dropped += inner.dropped;
                copy.blocks.push_back(std::move(inner.seq));
            }
            result.seq.push_back(SymbolItem{std::move(copy)});
        } else {
            result.seq.push_back(item);
        }
    }
    return result;
}

std::size_t count_items(const ItemSeq& seq) noexcept {
    std::size_t n = 0;
    for (const auto& item : seq) {
        ++n;
        if (const auto* c = std::get_if<Construct>(&item.node)) {
            for (const auto& block : c->blocks) {
                n += count_items(block);
            }
        }
    }
    return n;
}

std::size_t count_terminals(const ItemSeq& seq, OpKind kind) noexcept {
    std::size_t n = 0;
    for (const auto& item : seq) {
        if (const auto* t = std::get_if<Terminal>(&item.node)) {
            n += t->kind == kind ? 1 : 0;
        } else if (const auto* c = std::get_if<Construct>(&item.node)) {
            for (const auto& block : c->blocks) {
                n += count_terminals(block, kind);
            }
        }
    }
    return n;
}

bool has_nonterminals(const ItemSeq& seq) noexcept {
    for (const auto& item : seq) {
        if (std::holds_alternative<NonTerminal>(item.node)) {
            return true;
        }
        if (const auto* c = std::get_if<Construct>(&item.node)) {
            for (const auto& block : c->blocks) {
                if (has_nonterminals(block)) {
                    return true;
                }
            }
        }
    }
    return false;
}

} // namespace lsysgen
