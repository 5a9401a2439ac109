#pragma once

// Structural checks shared by the unit tests and the acceptance binary.
// Each returns an empty string on success and a description otherwise.

#include "support.hpp"

#include <set>

namespace testsupport {

struct BitFixture {
    std::string input;
    std::vector<int> expect;
};

inline BitFixture load_bit_fixture(const std::string& name) {
    std::istringstream in(read_file(source_dir() / "tests" / "fixtures" / name));
    BitFixture f;
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind("input = ", 0) == 0) {
            f.input = line.substr(8);
        } else if (line.rfind("expect = ", 0) == 0) {
            std::istringstream nums(line.substr(9));
            int v;
            while (nums >> v) {
                f.expect.push_back(v);
            }
        }
    }
    return f;
}

/// If statements of a list in pre-order (cond, the If itself, then, else).
inline void collect_ifs(const StmtList& list, std::vector<const IfStmt*>& out) {
    for (const auto& s : list) {
        if (const auto* i = std::get_if<IfStmt>(&s.node)) {
            collect_ifs(i->cond, out);
            out.push_back(i);
            collect_ifs(i->then, out);
            if (i->otherwise) {
                collect_ifs(*i->otherwise, out);
            }
        } else if (const auto* l = std::get_if<LoopStmt>(&s.node)) {
            collect_ifs(l->cond, out);
            collect_ifs(l->body, out);
        }
    }
}

inline std::vector<int> bits_of(const FunctionDef& f) {
    std::vector<const IfStmt*> ifs;
    collect_ifs(f.body, ifs);
    std::vector<int> bits;
    for (const auto* i : ifs) {
        bits.push_back(i->bitIndex);
    }
    return bits;
}

inline std::vector<const CallStmt*> calls_of(const StmtList& list) {
    std::vector<const CallStmt*> out;
    auto walk = [&](auto&& self, const StmtList& l) -> void {
        for (const auto& s : l) {
            if (const auto* c = std::get_if<CallStmt>(&s.node)) {
                out.push_back(c);
            } else if (const auto* i = std::get_if<IfStmt>(&s.node)) {
                self(self, i->cond);
                self(self, i->then);
                if (i->otherwise) {
                    self(self, *i->otherwise);
                }
            } else if (const auto* lp = std::get_if<LoopStmt>(&s.node)) {
                self(self, lp->cond);
                self(self, lp->body);
            }
        }
    };
    walk(walk, list);
    return out;
}

inline void raw_bits(const StmtList& list, std::vector<int>& out) {
    std::vector<const IfStmt*> ifs;
    collect_ifs(list, ifs);
    for (const auto* i : ifs) {
        out.push_back(i->rawBitIndex);
    }
}

/// Nesting: an If inside a branch of another If has a larger raw index.
/// Join: an If never reuses a raw index handed out in an earlier sibling's
/// subtree. `ancestor` is the raw index of the enclosing If (-1 at top).
inline std::string bitpath_violation(const StmtList& list, int ancestor = -1) {
    std::vector<int> earlier;
    for (const auto& s : list) {
        if (const auto* i = std::get_if<IfStmt>(&s.node)) {
            if (auto v = bitpath_violation(i->cond, ancestor); !v.empty()) return v;
            if (i->rawBitIndex <= ancestor) {
                return "nested If has index " + std::to_string(i->rawBitIndex) + " <= enclosing " +
                       std::to_string(ancestor);
            }
            for (const int b : earlier) {
                if (b == i->rawBitIndex) {
                    return "If reuses index " + std::to_string(b) + " from an earlier sibling subtree";
                }
            }
            if (auto v = bitpath_violation(i->then, i->rawBitIndex); !v.empty()) return v;
            if (i->otherwise) {
                if (auto v = bitpath_violation(*i->otherwise, i->rawBitIndex); !v.empty()) return v;
            }
            earlier.push_back(i->rawBitIndex);
            raw_bits(i->then, earlier);
            if (i->otherwise) {
                raw_bits(*i->otherwise, earlier);
            }
        } else if (const auto* l = std::get_if<LoopStmt>(&s.node)) {
            if (auto v = bitpath_violation(l->cond, ancestor); !v.empty()) return v;
            if (auto v = bitpath_violation(l->body, ancestor); !v.empty()) return v;
            raw_bits(l->cond, earlier);
            raw_bits(l->body, earlier);
        }
    }
    return {};
}

/// Canonical strings of every CALL body, found by walking the L-string.
inline void call_bodies(const ItemSeq& seq, std::set<std::string>& out) {
    for (const auto& item : seq) {
        if (const auto* c = std::get_if<Construct>(&item.node)) {
            if (c->kind == ConstructKind::Call) {
                out.insert(canonical_serialize(c->blocks[0]));
            }
            for (const auto& b : c->blocks) {
                call_bodies(b, out);
            }
        }
    }
}

/// A random pruned derivation of a random L-system whose rules contain CALL.
inline ItemSeq random_call_derivation(RandomSeq& gen) {
    const LSystemSpec spec = parse_spec(gen.spec_text());
    try {
        return prune_nonterminals(derive(spec, 3, DeriveOptions{200'000})).seq;
    } catch (const ResourceLimitError&) {
        return prune_nonterminals(derive(spec, 2)).seq;
    }
}

/// Dedup (one function per distinct CALL body), strictly shorter callee
/// canonical strings on every edge, and acyclicity via the verifier.
inline std::string dedup_violation(const ItemSeq& derived) {
    std::set<std::string> bodies;
    call_bodies(derived, bodies);
    const Program p = lower(derived, OperandPlan{});
    if (p.functions.size() != bodies.size() + 1) {
        return std::to_string(p.functions.size()) + " functions for " + std::to_string(bodies.size()) +
               " distinct CALL bodies";
    }
    std::set<std::string> canon;
    for (const auto& f : p.functions) {
        canon.insert(f.canonical);
        for (const auto* c : calls_of(f.body)) {
            if (p.function(c->callee).canonical.size() >= f.canonical.size()) {
                return "call edge f" + std::to_string(f.id.value) + " -> f" + std::to_string(c->callee.value) +
                       " does not shrink the canonical string";
            }
        }
    }
    if (canon.size() != p.functions.size()) {
        return "duplicate canonical strings";
    }
    // Independent cycle check: repeatedly strip functions with no callees left.
    std::vector<std::set<int>> edges(p.functions.size());
    for (const auto& f : p.functions) {
        for (const auto* c : calls_of(f.body)) {
            edges[static_cast<std::size_t>(f.id.value)].insert(c->callee.value);
        }
    }
    std::set<int> removed;
    bool progress = true;
    while (progress) {
        progress = false;
        for (std::size_t i = 0; i < edges.size(); ++i) {
            if (removed.count(static_cast<int>(i)) != 0) continue;
            bool leaf = true;
            for (const int e : edges[i]) {
                leaf = leaf && removed.count(e) != 0;
            }
            if (leaf) {
                removed.insert(static_cast<int>(i));
                progress = true;
            }
        }
    }
    if (removed.size() != edges.size()) {
        return "call graph has a cycle";
    }
    try {
        verify_program(p);
    } catch (const std::exception& e) {
        return e.what();
    }
    return {};
}

} // namespace testsupport
