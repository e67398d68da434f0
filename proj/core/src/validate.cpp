#include "inet/validate.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <string>

#include "inet/path.hpp"
#include "inet/printer.hpp"

namespace inet {

namespace {

struct RuleNameInfo {
    int total = 0;
    int lhs_ports = 0;
    int rhs_args = 0;
    int eq_sides = 0;
};

class Checker {
public:
    Checker(const Program& program, const ValidateOptions& options)
        : program_(program), options_(options) {}

    std::vector<Diagnostic> run() {
        check_capacity();
        std::map<std::pair<SymbolId, SymbolId>, int> unguarded;
        for (const Rule& rule : program_.rules) {
            check_rule(rule);
            if (!rule.guard) {
                auto key = std::minmax(rule.left.sym, rule.right.sym);
                if (++unguarded[{key.first, key.second}] > 1) {
                    error("duplicate rule for " + program_.symbols.name(rule.left.sym) + " >< " +
                              program_.symbols.name(rule.right.sym),
                          rule.pos);
                }
            }
        }
        if (program_.net) check_net(*program_.net);
        return std::move(diags_);
    }

private:
    void error(std::string message, SourcePos pos) {
        diags_.push_back(Diagnostic{std::move(message), pos});
    }

    void check_capacity() {
        for (SymbolId id = 0; id < static_cast<SymbolId>(program_.symbols.size()); ++id) {
            const SymbolInfo& info = program_.symbols.info(id);
            if (info.arity > options_.port_capacity) {
                error("symbol " + info.name + " has arity " + std::to_string(info.arity) +
                          " but the cell port capacity is " + std::to_string(options_.port_capacity),
                      {});
            }
        }
    }

    void check_rule(const Rule& rule) {
        std::set<std::string> attr_vars;
        auto bind_attr = [&](const RulePattern& pat) {
            if (!pat.attr_var) return;
            if (!attr_vars.insert(*pat.attr_var).second) {
                error("attribute variable " + *pat.attr_var + " bound twice", rule.pos);
            }
        };
        bind_attr(rule.left);
        bind_attr(rule.right);

        // Name occurrence accounting across LHS parameters and the RHS.
        std::map<std::string, RuleNameInfo> names;
        for (const RulePattern* pat : {&rule.left, &rule.right}) {
            for (const std::string& p : pat->params) {
                ++names[p].total;
                ++names[p].lhs_ports;
            }
        }

        int left_marks = 0;
        int right_marks = 0;
        for_each_subterm(rule.rhs, [&](const Term& t, const TermPath& path) {
            if (t.is_name()) {
                ++names[t.name].total;
                if (path.args.empty()) {
                    ++names[t.name].eq_sides;
                } else {
                    ++names[t.name].rhs_args;
                }
                return;
            }
            if (t.attr) check_attr_expr(*t.attr, attr_vars, rule.pos);
            if (t.kind == Term::Kind::Annotated) {
                (t.reuse == ReuseSide::Left ? left_marks : right_marks)++;
                if (!t.has_cast) {
                    SymbolId eff = t.reuse == ReuseSide::Left ? rule.left.sym : rule.right.sym;
                    const SymbolInfo& info = program_.symbols.info(eff);
                    if (static_cast<int>(t.args.size()) != info.arity) {
                        error("annotated term at " + path_render(path) + " reuses " + info.name +
                                  " but has " + std::to_string(t.args.size()) + " argument(s)",
                              rule.pos);
                    }
                    if (t.attr.has_value() != (info.attr_count == 1)) {
                        error("annotated term at " + path_render(path) +
                                  (t.attr ? " carries an attribute but " + info.name + " does not"
                                          : " is missing the attribute of " + info.name),
                              rule.pos);
                    }
                }
            }
        });
        if (left_marks > 1) error("more than one (*L) annotation", rule.pos);
        if (right_marks > 1) error("more than one (*R) annotation", rule.pos);

        for (const auto& [name, info] : names) {
            if (info.total != 2) {
                error("name " + name + " occurs " + std::to_string(info.total) + " times", rule.pos);
            }
            if (attr_vars.count(name)) {
                error("identifier " + name + " used both as a port name and an attribute variable",
                      rule.pos);
            }
        }

        if (rule.guard) {
            check_attr_expr(rule.guard->lhs, attr_vars, rule.pos);
            check_attr_expr(rule.guard->rhs, attr_vars, rule.pos);
        }

        check_wire_loops(rule, names);
    }

    void check_attr_expr(const AttrExpr& e, const std::set<std::string>& bound, SourcePos pos) {
        if (!e.is_literal() && !bound.count(e.var)) {
            error("attribute variable " + e.var + " is not bound by the rule left-hand side", pos);
        }
    }

    // A name whose two occurrences are both bare equation sides contributes no
    // concrete endpoint; chains of such equations that close on themselves
    // describe a wire loop that no instruction sequence can build.
    void check_wire_loops(const Rule& rule, const std::map<std::string, RuleNameInfo>& names) {
        std::map<std::string, std::string> parent;
        std::function<std::string(const std::string&)> find = [&](const std::string& x) {
            auto it = parent.find(x);
            if (it == parent.end() || it->second == x) return x;
            return it->second = find(it->second);
        };
        for (const auto& [name, info] : names) {
            if (info.total == 2) parent.emplace(name, name);
        }
        std::map<std::string, int> attachments;
        for (const auto& [name, info] : names) {
            if (info.total == 2) attachments[name] = info.lhs_ports + info.rhs_args;
        }
        for (const Equation& eq : rule.rhs) {
            const bool l_name = eq.left->is_name();
            const bool r_name = eq.right->is_name();
            if (l_name && r_name) {
                std::string a = find(eq.left->name);
                std::string b = find(eq.right->name);
                if (a == b) {
                    error("equation " + render(eq, program_.symbols) + " closes a wire loop",
                          rule.pos);
                    return;
                }
                parent[a] = b;
                attachments[b] += attachments[a];
                attachments.erase(a);
            } else if (l_name || r_name) {
                ++attachments[find(l_name ? eq.left->name : eq.right->name)];
            }
        }
    }

    void check_net(const Net& net) {
        std::map<std::string, int> occurrences;
        for_each_subterm(net.equations, [&](const Term& t, const TermPath&) {
            if (t.kind == Term::Kind::Annotated) {
                error("annotations are only allowed in rule right-hand sides", net.pos);
                return;
            }
            if (t.is_name()) {
                ++occurrences[t.name];
                return;
            }
            if (t.attr && !t.attr->is_literal()) {
                error("attribute in a net must be an integer literal", net.pos);
            }
        });

        std::set<std::string> interface;
        for (const std::string& name : net.interface) {
            if (!interface.insert(name).second) {
                error("interface name " + name + " listed twice", net.pos);
            }
        }
        for (const auto& [name, count] : occurrences) {
            if (count > 2) {
                error("name " + name + " occurs " + std::to_string(count) + " times in the net",
                      net.pos);
            } else if (count == 2 && interface.count(name)) {
                error("interface name " + name + " is not free (it occurs twice)", net.pos);
            } else if (count == 1 && !interface.count(name)) {
                error("free name " + name + " is missing from the interface", net.pos);
            }
        }
    }

    const Program& program_;
    const ValidateOptions& options_;
    std::vector<Diagnostic> diags_;
};

}  // namespace

std::vector<Diagnostic> validate(const Program& program, ValidateOptions options) {
    return Checker(program, options).run();
}

CheckedProgram check(Program program, ValidateOptions options) {
    std::vector<Diagnostic> diags = validate(program, options);
    if (!diags.empty()) throw ValidationError(std::move(diags));
    return CheckedProgram{std::move(program), options};
}

}  // namespace inet
