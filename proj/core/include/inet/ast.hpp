#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "inet/error.hpp"

namespace inet {

using SymbolId = std::int32_t;
inline constexpr SymbolId kNoSymbol = -1;

struct SymbolInfo {
    std::string name;
    int arity = 0;       // number of auxiliary ports
    int attr_count = 0;  // 0 or 1; fixed per symbol
};

/// Interning table for agent symbols. The arity and attribute count of a
/// symbol are fixed by its first occurrence; later occurrences that disagree
/// are load errors.
class SymbolTable {
public:
    SymbolId intern(std::string_view name, int arity, int attr_count, SourcePos pos = {});
    std::optional<SymbolId> find(std::string_view name) const;
    const SymbolInfo& info(SymbolId id) const { return infos_.at(static_cast<std::size_t>(id)); }
    const std::string& name(SymbolId id) const { return info(id).name; }
    int arity(SymbolId id) const { return info(id).arity; }
    int attr_count(SymbolId id) const { return info(id).attr_count; }
    std::size_t size() const { return infos_.size(); }

private:
    std::vector<SymbolInfo> infos_;
    std::unordered_map<std::string, SymbolId> index_;
};

/// Attribute expression: an integer literal, or a variable bound by the
/// attribute slot of a rule LHS pattern.
struct AttrExpr {
    enum class Kind { Literal, Var };
    Kind kind = Kind::Literal;
    std::int64_t value = 0;
    std::string var;

    static AttrExpr literal(std::int64_t v) { return {Kind::Literal, v, {}}; }
    static AttrExpr variable(std::string name) { return {Kind::Var, 0, std::move(name)}; }
    bool is_literal() const { return kind == Kind::Literal; }

    friend bool operator==(const AttrExpr& a, const AttrExpr& b) {
        if (a.kind != b.kind) return false;
        return a.is_literal() ? a.value == b.value : a.var == b.var;
    }
};

enum class ReuseSide { Left, Right };

inline const char* to_string(ReuseSide s) { return s == ReuseSide::Left ? "L" : "R"; }

struct Term;
using TermPtr = std::shared_ptr<const Term>;

/// A term of the calculus. Immutable once built; subtrees are shared freely.
///
/// Name       — a wire end, lowercase identifier.
/// Agent      — sym applied to exactly arity(sym) arguments.
/// Annotated  — an agent occurrence in a rule RHS marked to reuse one of the
///              active-pair cells; carries a cast symbol when the reused cell
///              changes symbol. Never appears in nets.
struct Term {
    enum class Kind { Name, Agent, Annotated };

    Kind kind = Kind::Name;
    std::string name;                       // Kind::Name
    SymbolId sym = kNoSymbol;               // Agent symbol / Annotated cast symbol
    ReuseSide reuse = ReuseSide::Left;      // Kind::Annotated
    bool has_cast = false;                  // Kind::Annotated
    std::optional<AttrExpr> attr;
    std::vector<TermPtr> args;

    bool is_name() const { return kind == Kind::Name; }
    bool is_agent_like() const { return kind != Kind::Name; }

    static TermPtr make_name(std::string id);
    static TermPtr make_agent(SymbolId sym, std::optional<AttrExpr> attr, std::vector<TermPtr> args);
    static TermPtr make_annotated(ReuseSide side, std::optional<SymbolId> cast,
                                  std::optional<AttrExpr> attr, std::vector<TermPtr> args);
};

bool structurally_equal(const Term& a, const Term& b);

/// Unordered pair of terms. The textual form fixes a left/right order, which
/// term paths and rendering rely on; the reduction semantics do not.
struct Equation {
    TermPtr left;
    TermPtr right;
};

/// One side of a rule LHS: a shallow agent pattern. Parameters are distinct
/// names; the attribute slot, when the symbol carries one, binds a variable.
struct RulePattern {
    SymbolId sym = kNoSymbol;
    std::optional<std::string> attr_var;
    std::vector<std::string> params;
    SourcePos pos;
};

enum class CmpOp { Lt, Le, Gt, Ge, Eq, Ne };

const char* to_string(CmpOp op);
bool eval_cmp(CmpOp op, std::int64_t a, std::int64_t b);

struct Guard {
    CmpOp op = CmpOp::Lt;
    AttrExpr lhs;
    AttrExpr rhs;
};

struct Rule {
    RulePattern left;
    RulePattern right;
    std::optional<Guard> guard;
    std::vector<Equation> rhs;
    SourcePos pos;

    bool has_annotations() const;
};

struct Net {
    std::vector<Equation> equations;
    std::vector<std::string> interface;
    SourcePos pos;
};

struct Program {
    SymbolTable symbols;
    std::vector<Rule> rules;
    std::optional<Net> net;
};

}  // namespace inet
