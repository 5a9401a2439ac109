#pragma once

// L-system specs over the program alphabet and their derivation.
//
// The alphabet has four behavior terminals (new, insert, remove, contains),
// three structure constructs (IF, LOOP, CALL) that carry nested blocks, and
// user-named nonterminals that productions rewrite.

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace lsysgen {

/// Behavior operations. The numeric values are the opcodes folded into the checksum.
enum class OpKind : std::uint8_t { New = 1, Insert = 2, Remove = 3, Contains = 4 };

enum class ConstructKind : std::uint8_t { If, Loop, Call };

std::string_view op_keyword(OpKind kind) noexcept;
std::string_view construct_keyword(ConstructKind kind) noexcept;

struct SymbolItem;
using ItemSeq = std::vector<SymbolItem>;

struct Terminal {
    OpKind kind;
    bool operator==(const Terminal&) const = default;
};

struct NonTerminal {
    std::string name;
    bool operator==(const NonTerminal&) const = default;
};

/// IF takes 2 or 3 blocks (cond, then[, else]); LOOP takes 1 or 2 (an
/// omitted cond is empty); CALL takes exactly 1.
struct Construct {
    ConstructKind kind;
    std::vector<ItemSeq> blocks;
    bool operator==(const Construct&) const;
};

struct SymbolItem {
    std::variant<Terminal, NonTerminal, Construct> node;

    static SymbolItem terminal(OpKind kind) { return {Terminal{kind}}; }
    static SymbolItem nonterminal(std::string name) { return {NonTerminal{std::move(name)}}; }
    static SymbolItem construct(ConstructKind kind, std::vector<ItemSeq> blocks) {
        return {Construct{kind, std::move(blocks)}};
    }

    bool operator==(const SymbolItem&) const = default;
};

struct Production {
    std::string lhs;
    ItemSeq rhs;
    bool operator==(const Production&) const = default;
};

struct LSystemSpec {
    ItemSeq axiom;
    std::vector<Production> productions; // file order, lhs unique

    const ItemSeq* find(std::string_view name) const noexcept;
    bool operator==(const LSystemSpec&) const = default;
};

/// Valid arities for a construct kind, as [min, max].
std::pair<std::size_t, std::size_t> construct_arity(ConstructKind kind) noexcept;

bool is_reserved_word(std::string_view word) noexcept;

/// Parses a spec file. One production per line (`NAME = body`), optional
/// trailing `;`, `#` comments, optional `AXIOM = body`. Without an AXIOM
/// line the axiom is the rhs of the first production. Throws ParseError.
LSystemSpec parse_spec(std::string_view text);

/// Parses a single production body. Throws ParseError.
ItemSeq parse_item_seq(std::string_view text);

/// Renders a sequence in body syntax; nonterminals are allowed.
std::string render(const ItemSeq& seq);

/// Renders a spec with an explicit AXIOM line; parse_spec() reads it back.
std::string render_spec(const LSystemSpec& spec);

/// One parallel rewriting step. Nonterminals without a production are kept.
ItemSeq rewrite_once(const LSystemSpec& spec, const ItemSeq& seq);

struct DeriveOptions {
    std::size_t maxItems = 100'000'000;
};

/// Applies rewrite_once `generations` times to the axiom. Throws
/// ResourceLimitError as soon as an intermediate sequence exceeds maxItems.
ItemSeq derive(const LSystemSpec& spec, unsigned generations, const DeriveOptions& options = {});

/// Deterministic, injective text form of a nonterminal-free sequence. This
/// is the key of the function dedup table. Throws std::invalid_argument on
/// nonterminals.
std::string canonical_serialize(const ItemSeq& seq);

struct PruneResult {
    ItemSeq seq;
    std::size_t dropped = 0;
};

/// Removes leftover nonterminals everywhere in the tree. Construct arity is preserved.
PruneResult prune_nonterminals(const ItemSeq& seq);

/// Item count including items nested inside construct blocks.
std::size_t count_items(const ItemSeq& seq) noexcept;
std::size_t count_terminals(const ItemSeq& seq, OpKind kind) noexcept;
bool has_nonterminals(const ItemSeq& seq) noexcept;

} // namespace lsysgen
