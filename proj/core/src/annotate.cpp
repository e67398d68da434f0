#include "inet/annotate.hpp"

#include <algorithm>

namespace inet {

namespace {

struct Candidate {
    Score score;
    std::size_t order = 0;  // index in traversal order
    TermPath path;
    SymbolId sym = kNoSymbol;
};

// Agent occurrences with each side's score, in traversal order.
std::vector<Candidate> agent_candidates(const MatchResult& result, const Rule& rule) {
    std::vector<Candidate> out;
    for (std::size_t i = 0; i < result.size(); ++i) {
        if (!result[i].is_agent) continue;
        const Term& t = path_resolve(rule.rhs, result[i].path);
        out.push_back(Candidate{result[i].score, i, result[i].path, t.sym});
    }
    return out;
}

// Highest score wins; earlier traversal order breaks ties.
std::optional<std::size_t> best_candidate(const std::vector<Candidate>& cands,
                                          std::optional<std::size_t> excluded) {
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < cands.size(); ++i) {
        if (excluded && *excluded == i) continue;
        if (!best || cands[*best].score < cands[i].score) best = i;
    }
    return best;
}

Annotation make_annotation(const Candidate& c, SymbolId pattern_sym) {
    Annotation a;
    a.path = c.path;
    if (c.sym != pattern_sym) a.cast = c.sym;
    return a;
}

TermPtr rewrite(const TermPtr& t, const TermPath& target, const std::vector<int>& prefix,
                ReuseSide side, const std::optional<SymbolId>& cast) {
    if (prefix == target.args) {
        if (!t->is_agent_like()) {
            throw LoadError("annotation path " + path_render(target) + " addresses a name");
        }
        return Term::make_annotated(side, cast, t->attr, t->args);
    }
    std::vector<TermPtr> args = t->args;
    std::size_t depth = prefix.size();
    if (depth < target.args.size()) {
        std::size_t idx = static_cast<std::size_t>(target.args[depth] - 1);
        if (idx >= args.size()) {
            throw LoadError("annotation path " + path_render(target) + " out of range");
        }
        std::vector<int> next = prefix;
        next.push_back(target.args[depth]);
        args[idx] = rewrite(args[idx], target, next, side, cast);
    }
    auto copy = std::make_shared<Term>(*t);
    copy->args = std::move(args);
    return copy;
}

void apply_one(Rule& rule, const Annotation& ann, ReuseSide side) {
    std::size_t eq = static_cast<std::size_t>(ann.path.eq_index - 1);
    if (eq >= rule.rhs.size()) {
        throw LoadError("annotation path " + path_render(ann.path) + " out of range");
    }
    TermPtr& slot = ann.path.side == TermPath::Side::L ? rule.rhs[eq].left : rule.rhs[eq].right;
    slot = rewrite(slot, ann.path, {}, side, ann.cast);
}

TermPtr strip_term(const TermPtr& t, const Rule& rule) {
    std::vector<TermPtr> args;
    args.reserve(t->args.size());
    for (const TermPtr& a : t->args) args.push_back(strip_term(a, rule));
    if (t->kind == Term::Kind::Name) return t;
    if (t->kind == Term::Kind::Agent) {
        return Term::make_agent(t->sym, t->attr, std::move(args));
    }
    SymbolId sym = t->has_cast
                       ? t->sym
                       : (t->reuse == ReuseSide::Left ? rule.left.sym : rule.right.sym);
    return Term::make_agent(sym, t->attr, std::move(args));
}

}  // namespace

AnnotationPlan select_annotations(const Rule& rule) {
    MatchResult left_scores = match_score(rule.left, rule.rhs);
    MatchResult right_scores = match_score(rule.right, rule.rhs);
    std::vector<Candidate> left = agent_candidates(left_scores, rule);
    std::vector<Candidate> right = agent_candidates(right_scores, rule);

    AnnotationPlan plan;
    std::optional<std::size_t> li = best_candidate(left, std::nullopt);
    std::optional<std::size_t> ri = best_candidate(right, std::nullopt);
    if (!li) return plan;  // no agents in the RHS

    if (*li == *ri) {
        // Both sides want the same occurrence; the better score keeps it.
        if (right[*ri].score < left[*li].score || left[*li].score == right[*ri].score) {
            ri = best_candidate(right, ri);
        } else {
            li = best_candidate(left, li);
        }
    }
    if (li) plan.for_left = make_annotation(left[*li], rule.left.sym);
    if (ri) plan.for_right = make_annotation(right[*ri], rule.right.sym);
    return plan;
}

Rule apply_plan(const Rule& rule, const AnnotationPlan& plan) {
    Rule out = rule;
    if (plan.for_left) apply_one(out, *plan.for_left, ReuseSide::Left);
    if (plan.for_right) apply_one(out, *plan.for_right, ReuseSide::Right);
    return out;
}

Rule strip_annotations(const Rule& rule) {
    Rule out = rule;
    for (Equation& eq : out.rhs) {
        eq.left = strip_term(eq.left, rule);
        eq.right = strip_term(eq.right, rule);
    }
    return out;
}

Program derive_program(const Program& program) {
    Program out = program;
    for (Rule& rule : out.rules) {
        if (rule.has_annotations()) continue;
        rule = apply_plan(rule, select_annotations(rule));
    }
    return out;
}

Program strip_program(const Program& program) {
    Program out = program;
    for (Rule& rule : out.rules) rule = strip_annotations(rule);
    return out;
}

}  // namespace inet
