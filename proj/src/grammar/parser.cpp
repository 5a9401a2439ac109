#include "lsysgen/error.hpp"
#include "lsysgen/grammar.hpp"

#include <cctype>
#include <optional>
#include <unordered_set>

namespace lsysgen {
namespace {

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_'; }

std::optional<OpKind> terminal_of(std::string_view word) {
    if (word == "new") return OpKind::New;
    if (word == "insert") return OpKind::Insert;
    if (word == "remove") return OpKind::Remove;
    if (word == "contains") return OpKind::Contains;
    return std::nullopt;
}

std::optional<ConstructKind> construct_of(std::string_view word) {
    if (word == "IF") return ConstructKind::If;
    if (word == "LOOP") return ConstructKind::Loop;
    if (word == "CALL") return ConstructKind::Call;
    return std::nullopt;
}

/// Recursive-descent parser over one line of text. Columns are reported
/// relative to the start of the line plus `columnBase`.
class BodyParser {
public:
    BodyParser(std::string_view text, std::size_t line, std::size_t columnBase)
        : text_(text), line_(line), columnBase_(columnBase) {}

    ItemSeq parse_body() {
        ItemSeq seq = parse_seq();
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == ';') {
            ++pos_;
            skip_ws();
        }
        if (pos_ < text_.size()) {
            fail(std::string("unexpected '") + text_[pos_] + "'");
        }
        return seq;
    }

private:
    ItemSeq parse_seq() {
        ItemSeq seq;
        for (;;) {
            skip_ws();
            if (pos_ >= text_.size()) {
                return seq;
            }
            const char c = text_[pos_];
            if (c == ',' || c == ')' || c == ';') {
                return seq;
            }
            if (!is_ident_start(c)) {
                fail(std::string("unexpected character '") + c + "'");
            }
            seq.push_back(parse_item());
        }
    }

    SymbolItem parse_item() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() && is_ident_char(text_[pos_])) {
            ++pos_;
        }
        const std::string_view word = text_.substr(start, pos_ - start);
        if (auto t = terminal_of(word)) {
            return SymbolItem::terminal(*t);
        }
        if (auto k = construct_of(word)) {
            return parse_construct(*k, start);
        }
        return SymbolItem::nonterminal(std::string(word));
    }

    SymbolItem parse_construct(ConstructKind kind, std::size_t start) {
        skip_ws();
        if (pos_ >= text_.size() || text_[pos_] != '(') {
            fail_at(start, std::string(construct_keyword(kind)) + " must be followed by '('");
        }
        ++pos_;
        std::vector<ItemSeq> blocks;
        for (;;) {
            blocks.push_back(parse_seq());
            skip_ws();
            if (pos_ >= text_.size()) {
                fail("unterminated " + std::string(construct_keyword(kind)) + "(");
            }
            if (text_[pos_] == ',') {
                ++pos_;
                continue;
            }
            if (text_[pos_] == ')') {
                ++pos_;
                break;
            }
            fail(std::string("unexpected '") + text_[pos_] + "' inside " + std::string(construct_keyword(kind)));
        }
        const auto [lo, hi] = construct_arity(kind);
        if (blocks.size() < lo || blocks.size() > hi) {
            const std::string expected =
                lo == hi ? std::to_string(lo) : std::to_string(lo) + " or " + std::to_string(hi);
            fail_at(start, std::string(construct_keyword(kind)) + " requires " + expected +
                               (hi == 1 ? " block, got " : " blocks, got ") +
                               std::to_string(blocks.size()));
        }
        return SymbolItem::construct(kind, std::move(blocks));
    }

    void skip_ws() {
        while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) {
            ++pos_;
        }
    }

    [[noreturn]] void fail(const std::string& message) const { fail_at(pos_, message); }
    [[noreturn]] void fail_at(std::size_t pos, const std::string& message) const {
        throw ParseError(message, line_, columnBase_ + pos);
    }

    std::string_view text_;
    std::size_t line_;
    std::size_t columnBase_;
    std::size_t pos_ = 0;
};

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

} // namespace

ItemSeq parse_item_seq(std::string_view text) {
    return BodyParser(text, 1, 1).parse_body();
}

LSystemSpec parse_spec(std::string_view text) {
    LSystemSpec spec;
    std::optional<ItemSeq> explicitAxiom;
    std::unordered_set<std::string> seen;

    std::size_t lineNo = 0;
    std::size_t offset = 0;
    while (offset <= text.size()) {
        std::size_t end = text.find('\n', offset);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        std::string_view line = text.substr(offset, end - offset);
        offset = end + 1;
        ++lineNo;

        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        if (auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        if (trim(line).empty()) {
            continue;
        }
        for (std::size_t i = 0; i < line.size(); ++i) {
            if (static_cast<unsigned char>(line[i]) >= 0x80) {
                throw ParseError("non-ASCII character", lineNo, i + 1);
            }
        }

        std::size_t pos = 0;
        while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
        const std::size_t nameStart = pos;
        if (pos >= line.size() || !is_ident_start(line[pos])) {
            throw ParseError("expected production name", lineNo, pos + 1);
        }
        while (pos < line.size() && is_ident_char(line[pos])) ++pos;
        const std::string name(line.substr(nameStart, pos - nameStart));
        while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
        if (pos >= line.size() || line[pos] != '=') {
            throw ParseError("expected '=' after '" + name + "'", lineNo, pos + 1);
        }
        ++pos;

        ItemSeq body = BodyParser(line.substr(pos), lineNo, pos + 1).parse_body();

        if (name == "AXIOM") {
            if (explicitAxiom) {
                throw ParseError("duplicate AXIOM line", lineNo, nameStart + 1);
            }
            explicitAxiom = std::move(body);
            continue;
        }
        if (is_reserved_word(name)) {
            throw ParseError("reserved word '" + name + "' cannot be a nonterminal", lineNo, nameStart + 1);
        }
        if (!seen.insert(name).second) {
            throw ParseError("duplicate production for '" + name + "'", lineNo, nameStart + 1);
        }
        spec.productions.push_back(Production{name, std::move(body)});
    }

    if (explicitAxiom) {
        spec.axiom = std::move(*explicitAxiom);
    } else if (!spec.productions.empty()) {
        spec.axiom = spec.productions.front().rhs;
    }
    return spec;
}

} // namespace lsysgen
