#include "inet/ast.hpp"

namespace inet {

SymbolId SymbolTable::intern(std::string_view name, int arity, int attr_count, SourcePos pos) {
    auto it = index_.find(std::string(name));
    if (it != index_.end()) {
        const SymbolInfo& prior = infos_[static_cast<std::size_t>(it->second)];
        if (prior.arity != arity) {
            throw LoadError("symbol " + prior.name + " used with " + std::to_string(arity) +
                                " argument(s), previously " + std::to_string(prior.arity),
                            pos);
        }
        if (prior.attr_count != attr_count) {
            throw LoadError("symbol " + prior.name +
                                (attr_count ? " given an attribute here but not elsewhere"
                                            : " missing its attribute"),
                            pos);
        }
        return it->second;
    }
    SymbolId id = static_cast<SymbolId>(infos_.size());
    infos_.push_back(SymbolInfo{std::string(name), arity, attr_count});
    index_.emplace(std::string(name), id);
    return id;
}

std::optional<SymbolId> SymbolTable::find(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

TermPtr Term::make_name(std::string id) {
    auto t = std::make_shared<Term>();
    t->kind = Kind::Name;
    t->name = std::move(id);
    return t;
}

TermPtr Term::make_agent(SymbolId sym, std::optional<AttrExpr> attr, std::vector<TermPtr> args) {
    auto t = std::make_shared<Term>();
    t->kind = Kind::Agent;
    t->sym = sym;
    t->attr = std::move(attr);
    t->args = std::move(args);
    return t;
}

TermPtr Term::make_annotated(ReuseSide side, std::optional<SymbolId> cast,
                             std::optional<AttrExpr> attr, std::vector<TermPtr> args) {
    auto t = std::make_shared<Term>();
    t->kind = Kind::Annotated;
    t->reuse = side;
    t->has_cast = cast.has_value();
    t->sym = cast.value_or(kNoSymbol);
    t->attr = std::move(attr);
    t->args = std::move(args);
    return t;
}

bool structurally_equal(const Term& a, const Term& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case Term::Kind::Name:
            return a.name == b.name;
        case Term::Kind::Agent:
            if (a.sym != b.sym || a.attr != b.attr) return false;
            break;
        case Term::Kind::Annotated:
            if (a.reuse != b.reuse || a.has_cast != b.has_cast || a.attr != b.attr) return false;
            if (a.has_cast && a.sym != b.sym) return false;
            break;
    }
    if (a.args.size() != b.args.size()) return false;
    for (std::size_t i = 0; i < a.args.size(); ++i) {
        if (!structurally_equal(*a.args[i], *b.args[i])) return false;
    }
    return true;
}

const char* to_string(CmpOp op) {
    switch (op) {
        case CmpOp::Lt: return "<";
        case CmpOp::Le: return "<=";
        case CmpOp::Gt: return ">";
        case CmpOp::Ge: return ">=";
        case CmpOp::Eq: return "==";
        case CmpOp::Ne: return "!=";
    }
    return "?";
}

bool eval_cmp(CmpOp op, std::int64_t a, std::int64_t b) {
    switch (op) {
        case CmpOp::Lt: return a < b;
        case CmpOp::Le: return a <= b;
        case CmpOp::Gt: return a > b;
        case CmpOp::Ge: return a >= b;
        case CmpOp::Eq: return a == b;
        case CmpOp::Ne: return a != b;
    }
    return false;
}

namespace {

bool term_has_annotations(const Term& t) {
    if (t.kind == Term::Kind::Annotated) return true;
    for (const TermPtr& a : t.args) {
        if (term_has_annotations(*a)) return true;
    }
    return false;
}

}  // namespace

bool Rule::has_annotations() const {
    for (const Equation& eq : rhs) {
        if (term_has_annotations(*eq.left) || term_has_annotations(*eq.right)) return true;
    }
    return false;
}

}  // namespace inet
