#include "inet/printer.hpp"

namespace inet {

namespace {

std::string render_attr(const AttrExpr& e) {
    return e.is_literal() ? std::to_string(e.value) : e.var;
}

void render_term(const Term& t, const SymbolTable& symbols, std::string& out) {
    switch (t.kind) {
        case Term::Kind::Name:
            out += t.name;
            return;
        case Term::Kind::Agent:
            out += symbols.name(t.sym);
            break;
        case Term::Kind::Annotated:
            out += t.reuse == ReuseSide::Left ? "(*L)" : "(*R)";
            if (t.has_cast) out += symbols.name(t.sym);
            break;
    }
    if (t.attr) {
        out += '{';
        out += render_attr(*t.attr);
        out += '}';
    }
    if (!t.args.empty()) {
        out += '(';
        for (std::size_t i = 0; i < t.args.size(); ++i) {
            if (i) out += ',';
            render_term(*t.args[i], symbols, out);
        }
        out += ')';
    }
}

void render_pattern(const RulePattern& pat, const SymbolTable& symbols, std::string& out) {
    out += symbols.name(pat.sym);
    if (pat.attr_var) {
        out += '{';
        out += *pat.attr_var;
        out += '}';
    }
    if (!pat.params.empty()) {
        out += '(';
        for (std::size_t i = 0; i < pat.params.size(); ++i) {
            if (i) out += ',';
            out += pat.params[i];
        }
        out += ')';
    }
}

void render_equation(const Equation& eq, const SymbolTable& symbols, std::string& out) {
    render_term(*eq.left, symbols, out);
    out += " ~ ";
    render_term(*eq.right, symbols, out);
}

}  // namespace

std::string render(const Term& term, const SymbolTable& symbols) {
    std::string out;
    render_term(term, symbols, out);
    return out;
}

std::string render(const Equation& eq, const SymbolTable& symbols) {
    std::string out;
    render_equation(eq, symbols, out);
    return out;
}

std::string render(const Rule& rule, const SymbolTable& symbols) {
    std::string out;
    render_pattern(rule.left, symbols, out);
    out += " >< ";
    render_pattern(rule.right, symbols, out);
    if (rule.guard) {
        out += " | ";
        out += render_attr(rule.guard->lhs);
        out += ' ';
        out += to_string(rule.guard->op);
        out += ' ';
        out += render_attr(rule.guard->rhs);
    }
    out += " => ";
    for (std::size_t i = 0; i < rule.rhs.size(); ++i) {
        if (i) out += ", ";
        render_equation(rule.rhs[i], symbols, out);
    }
    out += ';';
    return out;
}

std::string render(const Net& net, const SymbolTable& symbols) {
    std::string out = "net ";
    for (std::size_t i = 0; i < net.equations.size(); ++i) {
        if (i) out += ", ";
        render_equation(net.equations[i], symbols, out);
    }
    out += "; interface";
    for (std::size_t i = 0; i < net.interface.size(); ++i) {
        out += i ? ", " : " ";
        out += net.interface[i];
    }
    out += ';';
    return out;
}

std::string render(const Program& program) {
    std::string out;
    for (const Rule& rule : program.rules) {
        out += render(rule, program.symbols);
        out += '\n';
    }
    if (program.net) {
        out += render(*program.net, program.symbols);
        out += '\n';
    }
    return out;
}

}  // namespace inet
