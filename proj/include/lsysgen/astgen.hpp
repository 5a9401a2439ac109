#pragma once

// Lowering of derived L-strings into a generic program.
//
// Pipeline: extract_functions -> assign_path_bits (per function) ->
// plan_operands. lower() runs all three and collects warnings.

#include "lsysgen/grammar.hpp"

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace lsysgen {

/// Local variable slot within one function.
struct SlotId {
    std::int32_t value = -1;
    auto operator<=>(const SlotId&) const = default;
};

struct FunctionId {
    std::int32_t value = 0;
    auto operator<=>(const FunctionId&) const = default;
};

struct Stmt;
using StmtList = std::vector<Stmt>;

struct IfStmt {
    int bitIndex = -1;    // PATH bit tested, in [0, 63]
    int rawBitIndex = -1; // bit index before the mod-64 wrap
    StmtList cond;
    StmtList then;
    std::optional<StmtList> otherwise;
    bool operator==(const IfStmt&) const;
};

struct LoopStmt {
    StmtList cond; // may be empty
    StmtList body;
    bool operator==(const LoopStmt&) const;
};

struct CallStmt {
    FunctionId callee;
    std::vector<SlotId> available; // dominating slots, in definition order
    bool operator==(const CallStmt&) const = default;
};

struct NewStmt {
    SlotId slot;
    bool operator==(const NewStmt&) const = default;
};

/// insert, remove or contains on a slot with a constant operand.
struct OpStmt {
    OpKind kind = OpKind::Insert;
    SlotId slot;
    std::int64_t value = 0;
    bool operator==(const OpStmt&) const = default;
};

struct Stmt {
    std::variant<IfStmt, LoopStmt, CallStmt, NewStmt, OpStmt> node;
    bool operator==(const Stmt&) const = default;
};

struct FunctionDef {
    FunctionId id;
    std::string canonical;
    StmtList body;
    int maxBitIndex = -1;
    int numSlots = 0;
    bool operator==(const FunctionDef&) const = default;
};

enum class ContainerKind : std::uint8_t { Array, SortedList, Scalar };

std::string_view container_name(ContainerKind kind) noexcept;
std::optional<ContainerKind> parse_container(std::string_view name) noexcept;

struct OperandPlan {
    std::uint64_t seed = 0;
    std::int64_t valueRange = 1000;
    int tripCount = 2;
    ContainerKind container = ContainerKind::Array;
};

struct Program {
    std::vector<FunctionDef> functions; // functions[i].id.value == i
    FunctionId entry;
    OperandPlan plan;
    std::vector<std::string> warnings;

    const FunctionDef& function(FunctionId id) const { return functions.at(static_cast<std::size_t>(id.value)); }
};

/// 64-bit LCG shared bit-exactly with the emitted runtimes.
class Lcg {
public:
    static constexpr std::uint64_t kMultiplier = 6364136228273018565ULL;
    static constexpr std::uint64_t kIncrement = 1442695040888963407ULL;

    explicit Lcg(std::uint64_t seed) noexcept : state_(seed) {}

    std::uint64_t next() noexcept {
        state_ = state_ * kMultiplier + kIncrement;
        return state_ >> 33;
    }

private:
    std::uint64_t state_;
};

/// Turns every CALL(e) into a call to a deduplicated function keyed by
/// canonical_serialize(e). The top-level sequence becomes the entry
/// function (id 0); callees get ids in pre-order of first appearance.
/// The input must be free of nonterminals.
Program extract_functions(const ItemSeq& seq);

/// BitPath counter-stack assignment of PATH bits to every If in `f`.
/// Appends a warning when an index wraps past 63.
FunctionDef assign_path_bits(FunctionDef f, std::vector<std::string>* warnings = nullptr);

/// Slots whose `new` dominates the given call statement, in definition
/// order. `site` must point into f.body. Empty if not found.
std::vector<SlotId> available_vars(const FunctionDef& f, const CallStmt* site);

/// Draws slot choices and operand values from one Lcg stream in a fixed
/// pre-order walk; materializes a `new` before any op that has no
/// dominating slot; renumbers slots in definition order and refreshes
/// every call's available list.
Program plan_operands(Program program, const OperandPlan& plan);

/// Prunes nonterminals, extracts functions, assigns bits and plans operands.
Program lower(const ItemSeq& derived, const OperandPlan& plan);

/// Checks slot dominance, acyclicity (callee canonical strictly shorter),
/// dedup uniqueness and bit ranges. Throws std::logic_error on violation.
void verify_program(const Program& program);

std::size_t count_statements(const StmtList& body) noexcept;

} // namespace lsysgen
